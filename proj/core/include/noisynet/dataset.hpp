#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace noisynet {

enum class Split { Train, Test };

[[nodiscard]] std::string_view to_string(Split split) noexcept;

// Labeled inputs stored contiguously: sample i occupies inputs[i*input_size, (i+1)*input_size).
class Dataset {
public:
    Dataset() = default;
    // Throws ShapeError when inputs.size() != labels.size() * input_size.
    Dataset(std::size_t input_size, std::vector<double> inputs, std::vector<std::uint8_t> labels,
            Split split = Split::Train);

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }
    [[nodiscard]] std::size_t input_size() const noexcept { return input_size_; }
    [[nodiscard]] Split split() const noexcept { return split_; }

    [[nodiscard]] std::span<const double> input(std::size_t i) const noexcept {
        return {inputs_.data() + i * input_size_, input_size_};
    }
    [[nodiscard]] std::size_t label(std::size_t i) const noexcept { return labels_[i]; }
    [[nodiscard]] std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    [[nodiscard]] std::span<const double> inputs() const noexcept { return inputs_; }

    // Samples [first, first + count) as a new dataset with the same split tag.
    [[nodiscard]] Dataset slice(std::size_t first, std::size_t count) const;

private:
    std::size_t input_size_ = 0;
    std::vector<double> inputs_;
    std::vector<std::uint8_t> labels_;
    Split split_ = Split::Train;
};

}  // namespace noisynet
