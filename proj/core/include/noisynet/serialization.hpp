#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "noisynet/network.hpp"

namespace noisynet {

// One applied weight transform, recorded in meta.transform.
struct TransformRecord {
    std::string kind;  // "pool" or "ghost"
    std::size_t layer = 1;
    std::size_t m = 1;            // pool only
    std::string variant;          // ghost only: "I", "II", "III"
    double bias_magnitude = 0.0;  // ghost III only

    friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

struct WeightMeta {
    std::uint64_t seed = 0;
    std::uint64_t epochs = 0;
    std::vector<TransformRecord> transforms;

    friend bool operator==(const WeightMeta&, const WeightMeta&) = default;
};

struct WeightFile {
    Network network;
    WeightMeta meta;
};

// Weight file layout (UTF-8 JSON):
//   {"layers":[{"rows":R,"cols":C,"weights":[R*C row-major numbers],"biases":[C numbers],
//               "activation":"sigmoid"|"softmax"}, ...],
//    "meta":{"seed":S,"epochs":E[,"transform":[{"kind":"pool","layer":1,"m":3} |
//                                             {"kind":"ghost","layer":1,"variant":"III","B":30}, ...]]}}
// Numbers are written with shortest round-trip formatting, so load(save(x)) is bit-exact.
[[nodiscard]] std::string to_json(const Network& net, const WeightMeta& meta = {});
[[nodiscard]] WeightFile from_json(const std::string& text, const std::string& source = "<memory>");

// Writes through a temporary file and renames it into place.
void save(const std::filesystem::path& path, const Network& net, const WeightMeta& meta = {});
// Throws ParseError (malformed, with location) or ShapeError (inconsistent layer).
[[nodiscard]] WeightFile load(const std::filesystem::path& path);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace noisynet
