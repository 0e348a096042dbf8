#include "noisynet/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "noisynet/error.hpp"

namespace noisynet {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw ShapeError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                         std::to_string(data_.size()) + " entries");
    }
}

bool Matrix::all_finite() const noexcept { return noisynet::all_finite(data_); }

Vector matvec(const Matrix& weights, std::span<const double> y) {
    Vector out(weights.cols(), 0.0);
    matvec_accumulate(weights, y, out);
    return out;
}

void matvec_accumulate(const Matrix& weights, std::span<const double> y, std::span<double> out) {
    if (y.size() != weights.rows() || out.size() != weights.cols()) {
        throw ShapeError("matvec: vector of length " + std::to_string(y.size()) + " times matrix " +
                         std::to_string(weights.rows()) + "x" + std::to_string(weights.cols()) +
                         " into output of length " + std::to_string(out.size()));
    }
    const std::size_t cols = weights.cols();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        if (yi == 0.0) {
            continue;
        }
        const double* row = weights.data().data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            out[j] += yi * row[j];
        }
    }
}

bool all_finite(std::span<const double> v) noexcept {
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

std::size_t argmax(std::span<const double> v) noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) {
            best = i;
        }
    }
    return best;
}

}  // namespace noisynet
