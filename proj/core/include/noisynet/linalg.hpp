#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace noisynet {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    // Throws ShapeError if entries.size() != rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] bool all_finite() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Row vector times matrix: out_j = sum_i y_i * W(i, j).
// Requires y.size() == W.rows(); throws ShapeError otherwise.
[[nodiscard]] Vector matvec(const Matrix& weights, std::span<const double> y);

// Same product accumulated into `out` (size W.cols()) on top of its current contents.
// Rows with y_i == 0 are skipped; the result is bit-identical to the dense loop for finite W.
void matvec_accumulate(const Matrix& weights, std::span<const double> y, std::span<double> out);

[[nodiscard]] bool all_finite(std::span<const double> v) noexcept;

// Index of the maximum entry, lowest index on ties. Requires a nonempty span.
[[nodiscard]] std::size_t argmax(std::span<const double> v) noexcept;

}  // namespace noisynet
