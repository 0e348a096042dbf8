#pragma once

#include <cmath>
#include <span>

#include "noisynet/linalg.hpp"

namespace noisynet {

// Logistic function, evaluated on the branch that never exponentiates a positive number.
[[nodiscard]] inline double sigmoid(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

[[nodiscard]] Vector sigmoid(std::span<const double> x);
void sigmoid_inplace(std::span<double> x) noexcept;

// Max-subtracted softmax. Requires a nonempty input.
[[nodiscard]] Vector softmax(std::span<const double> z);
void softmax_inplace(std::span<double> z);

}  // namespace noisynet
