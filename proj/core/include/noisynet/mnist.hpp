#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "noisynet/dataset.hpp"

namespace noisynet {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct IdxImages {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;  // count * rows * cols bytes
};

// IDX parsing. Errors (bad magic, truncated header or payload, trailing bytes)
// raise ParseError naming `source` and the byte offset of the defect.
[[nodiscard]] IdxImages parse_idx_images(const std::string& bytes, const std::string& source = "<images>");
[[nodiscard]] std::vector<std::uint8_t> parse_idx_labels(const std::string& bytes, const std::string& source = "<labels>");

[[nodiscard]] std::string encode_idx_images(const IdxImages& images);
[[nodiscard]] std::string encode_idx_labels(const std::vector<std::uint8_t>& labels);

// Pixels divided by 255; labels must lie in 0..9 and the two files must agree on the count.
[[nodiscard]] Dataset make_dataset(const IdxImages& images, std::vector<std::uint8_t> labels, Split split,
                                   const std::string& source = "<labels>");
[[nodiscard]] Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels,
                                 Split split = Split::Train);
// Standard file names (train-images-idx3-ubyte, t10k-labels-idx1-ubyte, ...) under `dir`.
[[nodiscard]] Dataset load_mnist_dir(const std::filesystem::path& dir, Split split);

// Inverse of make_dataset: pixel = round(value * 255).
[[nodiscard]] IdxImages to_idx_images(const Dataset& data, std::uint32_t rows, std::uint32_t cols);

}  // namespace noisynet
