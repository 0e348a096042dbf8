#include "noisynet/dataset.hpp"

#include <string>
#include <utility>

#include "noisynet/error.hpp"

namespace noisynet {

std::string_view to_string(Split split) noexcept { return split == Split::Train ? "train" : "test"; }

Dataset::Dataset(std::size_t input_size, std::vector<double> inputs, std::vector<std::uint8_t> labels, Split split)
    : input_size_(input_size), inputs_(std::move(inputs)), labels_(std::move(labels)), split_(split) {
    if (inputs_.size() != labels_.size() * input_size_) {
        throw ShapeError("dataset: " + std::to_string(labels_.size()) + " labels but " + std::to_string(inputs_.size()) +
                         " input values for input size " + std::to_string(input_size_));
    }
}

Dataset Dataset::slice(std::size_t first, std::size_t count) const {
    if (first > size() || count > size() - first) {
        throw ShapeError("dataset slice [" + std::to_string(first) + ", " + std::to_string(first + count) +
                         ") out of range for " + std::to_string(size()) + " samples");
    }
    const auto begin = inputs_.begin() + static_cast<std::ptrdiff_t>(first * input_size_);
    std::vector<double> inputs(begin, begin + static_cast<std::ptrdiff_t>(count * input_size_));
    const auto lbegin = labels_.begin() + static_cast<std::ptrdiff_t>(first);
    std::vector<std::uint8_t> labels(lbegin, lbegin + static_cast<std::ptrdiff_t>(count));
    return Dataset(input_size_, std::move(inputs), std::move(labels), split_);
}

}  // namespace noisynet
