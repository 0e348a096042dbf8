#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "noisynet/dataset.hpp"
#include "noisynet/linalg.hpp"
#include "noisynet/network.hpp"

namespace noisynet {

struct TrainConfig {
    std::vector<std::size_t> hidden = {20};
    std::size_t classes = kMnistClasses;
    std::size_t epochs = 20;
    double validation_fraction = 0.05;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t shuffle_seed = 0;

    // Throws ConfigError unless epochs >= 1, batch_size >= 1 and 0 <= validation_fraction < 1.
    void validate() const;
};

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> train_accuracy;
    std::vector<double> validation_accuracy;  // NaN when the validation split is empty

    // "epoch,train_loss,train_acc,val_acc" header plus one row per epoch (1-based).
    [[nodiscard]] std::string to_csv() const;
};

// Gradients with the shapes of a network's layers.
struct GradientSet {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;

    [[nodiscard]] static GradientSet zeros_like(std::span<const Layer> layers);
    void scale(double factor) noexcept;
    void add(const GradientSet& other);
    void set_zero() noexcept;
};

// -log(max(p[label], 1e-12)). Throws ConfigError if label >= p.size().
[[nodiscard]] double crossentropy(std::span<const double> probabilities, std::size_t label);

// Gradient of crossentropy(forward(layers, input), label). Hidden layers must be
// sigmoid and the last softmax (ConfigError otherwise). The output delta is p - onehot.
[[nodiscard]] GradientSet backprop(const Network& net, std::span<const double> input, std::size_t label);

// Adds the sample's gradient into `acc` and returns {loss, predicted class}.
struct SampleResult {
    double loss = 0.0;
    std::size_t predicted = 0;
};
SampleResult accumulate_gradient(std::span<const Layer> layers, std::span<const double> input, std::size_t label,
                                 GradientSet& acc);

// Mean gradient over the samples `indices` of `data`.
[[nodiscard]] GradientSet batch_gradient(const Network& net, const Dataset& data, std::span<const std::size_t> indices);

// First and second moment estimates; `step` counts the updates applied so far.
struct AdamState {
    GradientSet first;
    GradientSet second;
    std::uint64_t step = 0;

    [[nodiscard]] static AdamState zeros_like(std::span<const Layer> layers);
};

// One bias-corrected Adam update in place: step += 1, then
//   m = b1 m + (1-b1) g,  v = b2 v + (1-b2) g^2,
//   theta -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
// Throws Error if any parameter becomes non-finite.
void adam_step(std::vector<Layer>& layers, const GradientSet& grads, AdamState& state, const TrainConfig& cfg);
[[nodiscard]] Network adam_step(const Network& net, const GradientSet& grads, AdamState& state, const TrainConfig& cfg);

// Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)), zero biases. Layer l
// draws from RandomStream::derive(seed, {l}) in row-major order.
[[nodiscard]] Network glorot_network(std::span<const std::size_t> sizes, std::uint64_t seed);

// Number of training and validation samples: the last floor(fraction * n) samples are held out.
struct SplitSizes {
    std::size_t train = 0;
    std::size_t validation = 0;
};
[[nodiscard]] SplitSizes validation_split(std::size_t n, double fraction) noexcept;

struct TrainResult {
    Network network;
    TrainHistory history;
};

// Minibatch Adam on categorical cross-entropy. Epoch e shuffles the training
// indices with a Fisher-Yates pass driven by RandomStream::derive(shuffle_seed, {e}).
[[nodiscard]] TrainResult train(const Dataset& data, const TrainConfig& cfg, std::uint64_t init_seed);

}  // namespace noisynet
