#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "noisynet/network.hpp"
#include "noisynet/serialization.hpp"

namespace noisynet {

// Replicate every neuron of noisy layer `layer` m times.
struct PoolSpec {
    std::size_t m = 1;
    std::size_t layer = 1;  // 1-based noisy layer; must be followed by another layer
};

enum class GhostVariant { I, II, III };

[[nodiscard]] std::string_view to_string(GhostVariant v) noexcept;
[[nodiscard]] std::optional<GhostVariant> parse_ghost_variant(std::string_view name) noexcept;

struct GhostSpec {
    GhostVariant variant = GhostVariant::II;
    double bias_magnitude = 30.0;  // B, used by variant III only; sigmoid(-B) must be < 1e-9
    std::size_t layer = 1;
};

// Neuron pooling. The incoming weight columns and biases of the noisy layer are
// tiled m times unscaled (replica r, neuron i sits at column r*k + i); the outgoing
// weight rows are tiled m times and divided by m. Noise-free outputs are preserved
// and m == 1 returns an identical network. Throws ConfigError for m == 0 or a bad layer.
[[nodiscard]] Network pool_transform(const Network& net, const PoolSpec& spec);

// Appends one input-less neuron to the noisy layer (zero incoming column, appended last).
// Its bias is 0 (I, II) or -B (III). Its outgoing row is -1 everywhere (I) or the
// cancellation row W_g,j = -sum_i W_i,j over the original rows (II, III).
[[nodiscard]] Network ghost_transform(const Network& net, const GhostSpec& spec);

// residual_j = sum_i W_i,j + W_g,j over the outgoing matrix of `layer`, where the ghost
// is the last neuron with an all-zero incoming column. Zero residual means correlated
// additive noise on that layer cancels at output j. Throws ConfigError if no ghost exists.
[[nodiscard]] Vector cancellation_residual(const Network& net, std::size_t layer = 1);

// meta.transform entries describing the transforms.
[[nodiscard]] TransformRecord to_record(const PoolSpec& spec);
[[nodiscard]] TransformRecord to_record(const GhostSpec& spec);

}  // namespace noisynet
