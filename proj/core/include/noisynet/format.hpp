#pragma once

#include <string>

namespace noisynet {

// Shortest decimal string that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);

// 64-bit FNV-1a digest of a byte string, printed as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& bytes);

}  // namespace noisynet
