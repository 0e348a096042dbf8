#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisynet/dataset.hpp"
#include "noisynet/network.hpp"
#include "noisynet/random.hpp"

namespace noisynet {

enum class NoiseMode { Additive, Multiplicative };
enum class Correlation { Correlated, Uncorrelated };

struct NoiseKind {
    NoiseMode mode = NoiseMode::Additive;
    Correlation correlation = Correlation::Uncorrelated;

    // Stable small integer used in sub-stream derivation: 2*mode + correlation.
    [[nodiscard]] std::uint64_t code() const noexcept {
        return 2u * static_cast<std::uint64_t>(mode) + static_cast<std::uint64_t>(correlation);
    }

    friend bool operator==(const NoiseKind&, const NoiseKind&) = default;
};

// "additive-correlated", "additive-uncorrelated", "multiplicative-correlated", "multiplicative-uncorrelated".
[[nodiscard]] std::string to_string(NoiseKind kind);
[[nodiscard]] std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept;

// A white Gaussian noise source of intensity D (variance 2D) acting on the output
// of network layer `layer` (1-based over non-input layers: 1 = first hidden layer).
struct NoiseSource {
    NoiseKind kind;
    std::size_t layer = 1;
    double intensity = 0.0;

    [[nodiscard]] double amplitude() const noexcept { return std::sqrt(2.0 * intensity); }
    // D from the plotted amplitude sqrt(2D).
    [[nodiscard]] static NoiseSource from_amplitude(NoiseKind kind, std::size_t layer, double amplitude) noexcept {
        return NoiseSource{kind, layer, amplitude * amplitude / 2.0};
    }

    friend bool operator==(const NoiseSource&, const NoiseSource&) = default;
};

struct NoiseConfig {
    std::vector<NoiseSource> sources;
    std::uint64_t seed = 0;

    // Throws ConfigError on negative/non-finite D, a layer outside [1, net.depth()],
    // or two sources with the same (kind, layer).
    void validate(const Network& net) const;
};

// Stream feeding `source` for one (sample, repeat) cell. Key derived from
// (seed, layer, kind code, repeat) via RandomStream::derive; stream_id = sample index.
// Correlated sources draw once per cell, uncorrelated ones once per neuron in index order.
[[nodiscard]] RandomStream noise_stream(std::uint64_t seed, const NoiseSource& source, std::uint64_t sample_index,
                                        std::uint64_t repeat);

// Single-source noise operator:
//   additive:        y_i + sqrt(2D) * xi_i
//   multiplicative:  y_i * (1 + sqrt(2D) * xi_i)
// with xi shared across i when correlated. D == 0 leaves y untouched and draws nothing.
void apply_noise(std::span<double> y, const NoiseSource& source, RandomStream& stream);

// All sources of one layer; streams[k] feeds sources[k]. Multiplicative sources are
// applied before additive ones regardless of list order.
void apply_noise(std::span<double> y, std::span<const NoiseSource> sources, std::span<RandomStream> streams);

// forward() with the configured noise applied to each layer's output. Sigmoid layers
// get Y = N(f(X)); a softmax layer is treated as the normalizing readout of its neuron
// states, so Y = softmax(N(X)). The trace keeps the noise-free X. `sample_index` and
// `repeat` select the sub-streams.
[[nodiscard]] ForwardTrace noisy_forward(const Network& net, std::span<const double> input, const NoiseConfig& cfg,
                                         std::uint64_t sample_index, std::uint64_t repeat = 0);

struct NoisyAccuracy {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample standard deviation over repeats / sqrt(repeats); 0 for one repeat
    std::vector<double> per_repeat;
};

// Accuracy over `repeats` independent noise realizations of the whole dataset.
// Sample i of repeat r uses the streams noise_stream(cfg.seed, source, i, r), so the
// result does not depend on `threads`.
[[nodiscard]] NoisyAccuracy noisy_accuracy(const Network& net, const Dataset& data, const NoiseConfig& cfg,
                                           std::size_t repeats, std::size_t threads = 1);

// Mean and standard error of a set of per-repeat accuracies.
[[nodiscard]] NoisyAccuracy summarize(std::vector<double> per_repeat);

}  // namespace noisynet
