#pragma once

#include <stdexcept>
#include <string>

namespace noisynet {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dimension disagreement between operands (matrix/vector/layer shapes).
class ShapeError : public Error {
public:
    using Error::Error;
};

// Malformed input file. The message carries the location of the defect.
class ParseError : public Error {
public:
    using Error::Error;
};

// Invalid configuration value (negative intensity, m == 0, bad layer index, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace noisynet
