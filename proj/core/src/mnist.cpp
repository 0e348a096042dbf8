#include "noisynet/mnist.hpp"

#include <cmath>
#include <cstdio>

#include "noisynet/error.hpp"
#include "noisynet/serialization.hpp"

namespace noisynet {
namespace {

std::uint32_t read_be32(const std::string& bytes, std::size_t offset, const std::string& source) {
    if (bytes.size() < offset + 4) {
        throw ParseError(source + ": truncated header at byte " + std::to_string(offset) + " (file has " +
                         std::to_string(bytes.size()) + " bytes)");
    }
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v = (v << 8) | static_cast<unsigned char>(bytes[offset + i]);
    }
    return v;
}

void append_be32(std::string& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xFFu));
    }
}

std::string hex32(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

void check_payload(const std::string& bytes, std::size_t offset, std::size_t expected, const std::string& source) {
    if (bytes.size() < offset + expected) {
        throw ParseError(source + ": truncated payload at byte " + std::to_string(bytes.size()) + ": expected " +
                         std::to_string(expected) + " bytes from offset " + std::to_string(offset));
    }
    if (bytes.size() > offset + expected) {
        throw ParseError(source + ": trailing data at byte " + std::to_string(offset + expected));
    }
}

}  // namespace

IdxImages parse_idx_images(const std::string& bytes, const std::string& source) {
    const std::uint32_t magic = read_be32(bytes, 0, source);
    if (magic != kIdxImagesMagic) {
        throw ParseError(source + ": bad magic number " + hex32(magic) + " at byte 0, expected " +
                         hex32(kIdxImagesMagic));
    }
    IdxImages img;
    img.count = read_be32(bytes, 4, source);
    img.rows = read_be32(bytes, 8, source);
    img.cols = read_be32(bytes, 12, source);
    const std::size_t n = std::size_t{img.count} * img.rows * img.cols;
    check_payload(bytes, 16, n, source);
    img.pixels.assign(bytes.begin() + 16, bytes.end());
    return img;
}

std::vector<std::uint8_t> parse_idx_labels(const std::string& bytes, const std::string& source) {
    const std::uint32_t magic = read_be32(bytes, 0, source);
    if (magic != kIdxLabelsMagic) {
        throw ParseError(source + ": bad magic number " + hex32(magic) + " at byte 0, expected " +
                         hex32(kIdxLabelsMagic));
    }
    const std::uint32_t count = read_be32(bytes, 4, source);
    check_payload(bytes, 8, count, source);
    return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.end());
}

std::string encode_idx_images(const IdxImages& images) {
    std::string out;
    out.reserve(16 + images.pixels.size());
    append_be32(out, kIdxImagesMagic);
    append_be32(out, images.count);
    append_be32(out, images.rows);
    append_be32(out, images.cols);
    out.append(images.pixels.begin(), images.pixels.end());
    return out;
}

std::string encode_idx_labels(const std::vector<std::uint8_t>& labels) {
    std::string out;
    append_be32(out, kIdxLabelsMagic);
    append_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.append(labels.begin(), labels.end());
    return out;
}

Dataset make_dataset(const IdxImages& images, std::vector<std::uint8_t> labels, Split split,
                     const std::string& source) {
    if (labels.size() != images.count) {
        throw ParseError(source + ": count mismatch at byte 4: labels file holds " + std::to_string(labels.size()) +
                         " items, images file " + std::to_string(images.count));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 9) {
            throw ParseError(source + ": label " + std::to_string(labels[i]) + " out of range at byte " +
                             std::to_string(8 + i));
        }
    }
    std::vector<double> inputs(images.pixels.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        inputs[i] = static_cast<double>(images.pixels[i]) / 255.0;
    }
    return Dataset(std::size_t{images.rows} * images.cols, std::move(inputs), std::move(labels), split);
}

Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels, Split split) {
    const IdxImages img = parse_idx_images(read_file(images), images.string());
    auto lab = parse_idx_labels(read_file(labels), labels.string());
    return make_dataset(img, std::move(lab), split, labels.string());
}

Dataset load_mnist_dir(const std::filesystem::path& dir, Split split) {
    const std::string prefix = split == Split::Train ? "train" : "t10k";
    return load_mnist(dir / (prefix + "-images-idx3-ubyte"), dir / (prefix + "-labels-idx1-ubyte"), split);
}

IdxImages to_idx_images(const Dataset& data, std::uint32_t rows, std::uint32_t cols) {
    if (std::size_t{rows} * cols != data.input_size()) {
        throw ShapeError("to_idx_images: " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not match input size " + std::to_string(data.input_size()));
    }
    IdxImages img;
    img.count = static_cast<std::uint32_t>(data.size());
    img.rows = rows;
    img.cols = cols;
    img.pixels.reserve(data.inputs().size());
    for (double v : data.inputs()) {
        img.pixels.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    }
    return img;
}

}  // namespace noisynet
