#include "noisynet/activations.hpp"

#include <algorithm>

#include "noisynet/error.hpp"

namespace noisynet {

Vector sigmoid(std::span<const double> x) {
    Vector out(x.begin(), x.end());
    sigmoid_inplace(out);
    return out;
}

void sigmoid_inplace(std::span<double> x) noexcept {
    for (double& v : x) {
        v = sigmoid(v);
    }
}

Vector softmax(std::span<const double> z) {
    Vector out(z.begin(), z.end());
    softmax_inplace(out);
    return out;
}

void softmax_inplace(std::span<double> z) {
    if (z.empty()) {
        throw ShapeError("softmax of an empty vector");
    }
    const double peak = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - peak);
        total += v;
    }
    for (double& v : z) {
        v /= total;
    }
}

}  // namespace noisynet
