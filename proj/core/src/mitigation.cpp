#include "noisynet/mitigation.hpp"

#include <string>
#include <utility>
#include <vector>

#include "noisynet/activations.hpp"
#include "noisynet/error.hpp"

namespace noisynet {

std::string_view to_string(GhostVariant v) noexcept {
    switch (v) {
        case GhostVariant::I: return "I";
        case GhostVariant::II: return "II";
        case GhostVariant::III: return "III";
    }
    return "?";
}

std::optional<GhostVariant> parse_ghost_variant(std::string_view name) noexcept {
    if (name == "I" || name == "1") return GhostVariant::I;
    if (name == "II" || name == "2") return GhostVariant::II;
    if (name == "III" || name == "3") return GhostVariant::III;
    return std::nullopt;
}

namespace {

void check_layer(const Network& net, std::size_t layer) {
    if (layer < 1 || layer >= net.depth()) {
        throw ConfigError("mitigation layer " + std::to_string(layer) + " must be in [1, " +
                          std::to_string(net.depth() - 1) + "] (a layer followed by another layer)");
    }
}

}  // namespace

Network pool_transform(const Network& net, const PoolSpec& spec) {
    if (spec.m == 0) {
        throw ConfigError("pool multiplicity m must be >= 1");
    }
    check_layer(net, spec.layer);
    std::vector<Layer> layers(net.layers().begin(), net.layers().end());
    Layer& in = layers[spec.layer - 1];
    Layer& out = layers[spec.layer];
    const std::size_t k = in.fan_out();
    const std::size_t m = spec.m;
    const auto scale = static_cast<double>(m);

    Matrix w_in(in.fan_in(), k * m);
    for (std::size_t r = 0; r < in.fan_in(); ++r) {
        for (std::size_t rep = 0; rep < m; ++rep) {
            for (std::size_t i = 0; i < k; ++i) w_in(r, rep * k + i) = in.weights(r, i);
        }
    }
    Vector b_in(k * m);
    for (std::size_t rep = 0; rep < m; ++rep) {
        for (std::size_t i = 0; i < k; ++i) b_in[rep * k + i] = in.biases[i];
    }

    Matrix w_out(k * m, out.fan_out());
    for (std::size_t rep = 0; rep < m; ++rep) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < out.fan_out(); ++j) w_out(rep * k + i, j) = out.weights(i, j) / scale;
        }
    }

    in.weights = std::move(w_in);
    in.biases = std::move(b_in);
    out.weights = std::move(w_out);
    return Network(std::move(layers));
}

Network ghost_transform(const Network& net, const GhostSpec& spec) {
    check_layer(net, spec.layer);
    if (spec.variant == GhostVariant::III && !(spec.bias_magnitude > 0.0 && sigmoid(-spec.bias_magnitude) < 1e-9)) {
        throw ConfigError("ghost III bias magnitude B must satisfy sigmoid(-B) < 1e-9 (B > ~20.7)");
    }
    std::vector<Layer> layers(net.layers().begin(), net.layers().end());
    Layer& in = layers[spec.layer - 1];
    Layer& out = layers[spec.layer];
    const std::size_t k = in.fan_out();

    Matrix w_in(in.fan_in(), k + 1);
    for (std::size_t r = 0; r < in.fan_in(); ++r) {
        for (std::size_t i = 0; i < k; ++i) w_in(r, i) = in.weights(r, i);
    }
    Vector b_in = in.biases;
    b_in.push_back(spec.variant == GhostVariant::III ? -spec.bias_magnitude : 0.0);

    Matrix w_out(k + 1, out.fan_out());
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < out.fan_out(); ++j) w_out(i, j) = out.weights(i, j);
    }
    for (std::size_t j = 0; j < out.fan_out(); ++j) {
        if (spec.variant == GhostVariant::I) {
            w_out(k, j) = -1.0;
        } else {
            double column = 0.0;
            for (std::size_t i = 0; i < k; ++i) column += out.weights(i, j);
            w_out(k, j) = -column;
        }
    }

    in.weights = std::move(w_in);
    in.biases = std::move(b_in);
    out.weights = std::move(w_out);
    return Network(std::move(layers));
}

Vector cancellation_residual(const Network& net, std::size_t layer) {
    check_layer(net, layer);
    const Layer& in = net.layer(layer - 1);
    const Layer& out = net.layer(layer);
    std::optional<std::size_t> ghost;
    for (std::size_t c = in.fan_out(); c-- > 0;) {
        bool zero = true;
        for (std::size_t r = 0; r < in.fan_in() && zero; ++r) zero = in.weights(r, c) == 0.0;
        if (zero) {
            ghost = c;
            break;
        }
    }
    if (!ghost) {
        throw ConfigError("layer " + std::to_string(layer) + " has no ghost neuron (no all-zero incoming column)");
    }
    Vector residual(out.fan_out(), 0.0);
    for (std::size_t j = 0; j < out.fan_out(); ++j) {
        double column = 0.0;
        for (std::size_t i = 0; i < out.fan_in(); ++i) {
            if (i != *ghost) column += out.weights(i, j);
        }
        residual[j] = column + out.weights(*ghost, j);
    }
    return residual;
}

TransformRecord to_record(const PoolSpec& spec) {
    TransformRecord rec;
    rec.kind = "pool";
    rec.layer = spec.layer;
    rec.m = spec.m;
    return rec;
}

TransformRecord to_record(const GhostSpec& spec) {
    TransformRecord rec;
    rec.kind = "ghost";
    rec.layer = spec.layer;
    rec.variant = std::string(to_string(spec.variant));
    rec.bias_magnitude = spec.variant == GhostVariant::III ? spec.bias_magnitude : 0.0;
    return rec;
}

}  // namespace noisynet
