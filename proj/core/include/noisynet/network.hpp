#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "noisynet/dataset.hpp"
#include "noisynet/linalg.hpp"

namespace noisynet {

inline constexpr std::size_t kMnistInputs = 784;
inline constexpr std::size_t kMnistClasses = 10;

enum class Activation { Sigmoid, Softmax };

[[nodiscard]] std::string_view to_string(Activation a) noexcept;
[[nodiscard]] std::optional<Activation> parse_activation(std::string_view name) noexcept;

// Applies the activation to a preactivation vector in place.
void activate_inplace(Activation a, std::span<double> x);

// Dense layer: out = activation(in . weights + biases), weights is fan_in x fan_out.
struct Layer {
    Matrix weights;
    Vector biases;
    Activation activation = Activation::Sigmoid;

    [[nodiscard]] std::size_t fan_in() const noexcept { return weights.rows(); }
    [[nodiscard]] std::size_t fan_out() const noexcept { return weights.cols(); }

    // Preactivation X = y . W + b.
    [[nodiscard]] Vector preactivate(std::span<const double> y) const;

    friend bool operator==(const Layer&, const Layer&) = default;
};

// Ordered stack of dense layers. Immutable once constructed; the constructor
// validates shapes and finiteness and throws ShapeError naming the offending layer.
class Network {
public:
    Network() = default;
    explicit Network(std::vector<Layer> layers);

    [[nodiscard]] std::span<const Layer> layers() const noexcept { return layers_; }
    [[nodiscard]] const Layer& layer(std::size_t i) const { return layers_.at(i); }
    [[nodiscard]] std::size_t depth() const noexcept { return layers_.size(); }
    [[nodiscard]] std::size_t input_size() const noexcept;
    [[nodiscard]] std::size_t output_size() const noexcept;
    // Total number of weights and biases.
    [[nodiscard]] std::size_t parameter_count() const noexcept;

    // Builder access for code that produces a new network from this one.
    [[nodiscard]] std::vector<Layer> release_layers() && noexcept { return std::move(layers_); }

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::vector<Layer> layers_;
};

// Zero weights and biases; sigmoid hidden layers, softmax output.
[[nodiscard]] Network zero_network(std::span<const std::size_t> sizes);

// Per-layer preactivations X^n and activations Y^n (index 0 = first non-input layer).
struct ForwardTrace {
    std::vector<Vector> preactivations;
    std::vector<Vector> activations;

    [[nodiscard]] const Vector& output() const { return activations.back(); }

    friend bool operator==(const ForwardTrace&, const ForwardTrace&) = default;
};

// Noise-free inference. Throws ShapeError if input.size() != net.input_size().
[[nodiscard]] ForwardTrace forward(const Network& net, std::span<const double> input);
[[nodiscard]] Vector forward_output(const Network& net, std::span<const double> input);

// Argmax of the final activation, lowest index on ties.
[[nodiscard]] std::size_t predict(const Network& net, std::span<const double> input);

// Fraction of correctly classified samples. Throws ConfigError on an empty dataset.
[[nodiscard]] double accuracy(const Network& net, const Dataset& data);

}  // namespace noisynet
