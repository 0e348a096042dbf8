#include "noisynet/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "noisynet/activations.hpp"
#include "noisynet/error.hpp"
#include "noisynet/format.hpp"
#include "noisynet/random.hpp"

namespace noisynet {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        throw ConfigError("validation fraction must lie in [0, 1)");
    }
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
    if (classes < 2) throw ConfigError("need at least two classes");
}

std::string TrainHistory::to_csv() const {
    std::string out = "epoch,train_loss,train_acc,val_acc\n";
    for (std::size_t e = 0; e < train_loss.size(); ++e) {
        out += std::to_string(e + 1) + ',' + format_double(train_loss[e]) + ',' + format_double(train_accuracy[e]) +
               ',' + format_double(validation_accuracy[e]) + '\n';
    }
    return out;
}

GradientSet GradientSet::zeros_like(std::span<const Layer> layers) {
    GradientSet g;
    for (const Layer& l : layers) {
        g.weights.emplace_back(l.fan_in(), l.fan_out());
        g.biases.emplace_back(l.fan_out(), 0.0);
    }
    return g;
}

void GradientSet::scale(double factor) noexcept {
    for (auto& w : weights)
        for (double& v : w.data()) v *= factor;
    for (auto& b : biases)
        for (double& v : b) v *= factor;
}

void GradientSet::add(const GradientSet& other) {
    if (other.weights.size() != weights.size()) {
        throw ShapeError("gradient sets with different layer counts");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        auto dst = weights[l].data();
        auto src = other.weights[l].data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
    }
}

void GradientSet::set_zero() noexcept {
    for (auto& w : weights)
        for (double& v : w.data()) v = 0.0;
    for (auto& b : biases)
        for (double& v : b) v = 0.0;
}

double crossentropy(std::span<const double> probabilities, std::size_t label) {
    if (label >= probabilities.size()) {
        throw ConfigError("label " + std::to_string(label) + " out of range for " +
                          std::to_string(probabilities.size()) + " classes");
    }
    return -std::log(std::max(probabilities[label], 1e-12));
}

namespace {

void check_trainable(std::span<const Layer> layers) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Activation want = l + 1 == layers.size() ? Activation::Softmax : Activation::Sigmoid;
        if (layers[l].activation != want) {
            throw ConfigError("backprop supports sigmoid hidden layers and a softmax output; layer " +
                              std::to_string(l) + " is " + std::string(to_string(layers[l].activation)));
        }
    }
}

}  // namespace

SampleResult accumulate_gradient(std::span<const Layer> layers, std::span<const double> input, std::size_t label,
                                 GradientSet& acc) {
    check_trainable(layers);
    if (input.size() != layers.front().fan_in()) {
        throw ShapeError("input of length " + std::to_string(input.size()) + " for network expecting " +
                         std::to_string(layers.front().fan_in()));
    }
    // Forward, keeping every activation.
    std::vector<Vector> act;
    act.reserve(layers.size());
    std::span<const double> y = input;
    for (const Layer& layer : layers) {
        Vector x = layer.preactivate(y);
        activate_inplace(layer.activation, x);
        act.push_back(std::move(x));
        y = act.back();
    }
    const Vector& probs = act.back();
    SampleResult result{crossentropy(probs, label), argmax(probs)};

    // Fused softmax + cross-entropy delta.
    Vector delta = probs;
    delta[label] -= 1.0;
    for (std::size_t l = layers.size(); l-- > 0;) {
        std::span<const double> below = l == 0 ? input : std::span<const double>(act[l - 1]);
        Matrix& gw = acc.weights[l];
        const std::size_t cols = gw.cols();
        for (std::size_t i = 0; i < below.size(); ++i) {
            const double yi = below[i];
            if (yi == 0.0) continue;
            auto row = gw.row(i);
            for (std::size_t j = 0; j < cols; ++j) row[j] += yi * delta[j];
        }
        for (std::size_t j = 0; j < cols; ++j) acc.biases[l][j] += delta[j];
        if (l == 0) break;
        const Matrix& w = layers[l].weights;
        Vector prev(w.rows(), 0.0);
        for (std::size_t i = 0; i < w.rows(); ++i) {
            const auto wrow = w.row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += wrow[j] * delta[j];
            const double a = act[l - 1][i];
            prev[i] = s * a * (1.0 - a);
        }
        delta = std::move(prev);
    }
    return result;
}

GradientSet backprop(const Network& net, std::span<const double> input, std::size_t label) {
    GradientSet g = GradientSet::zeros_like(net.layers());
    accumulate_gradient(net.layers(), input, label, g);
    return g;
}

GradientSet batch_gradient(const Network& net, const Dataset& data, std::span<const std::size_t> indices) {
    GradientSet g = GradientSet::zeros_like(net.layers());
    if (indices.empty()) return g;
    for (std::size_t i : indices) {
        accumulate_gradient(net.layers(), data.input(i), data.label(i), g);
    }
    g.scale(1.0 / static_cast<double>(indices.size()));
    return g;
}

AdamState AdamState::zeros_like(std::span<const Layer> layers) {
    return AdamState{GradientSet::zeros_like(layers), GradientSet::zeros_like(layers), 0};
}

void adam_step(std::vector<Layer>& layers, const GradientSet& grads, AdamState& state, const TrainConfig& cfg) {
    if (grads.weights.size() != layers.size() || state.first.weights.size() != layers.size()) {
        throw ShapeError("adam_step: gradient/moment layer count does not match the network");
    }
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);

    auto update = [&](std::span<double> theta, std::span<const double> g, std::span<double> m, std::span<double> v) {
        if (g.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
            throw ShapeError("adam_step: gradient/moment shape does not match the parameters");
        }
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            theta[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.epsilon);
        }
    };
    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights.data(), grads.weights[l].data(), state.first.weights[l].data(),
               state.second.weights[l].data());
        update(layers[l].biases, grads.biases[l], state.first.biases[l], state.second.biases[l]);
        if (!layers[l].weights.all_finite() || !all_finite(layers[l].biases)) {
            throw Error("non-finite parameter in layer " + std::to_string(l) + " after Adam step " +
                        std::to_string(state.step));
        }
    }
}

Network adam_step(const Network& net, const GradientSet& grads, AdamState& state, const TrainConfig& cfg) {
    std::vector<Layer> layers(net.layers().begin(), net.layers().end());
    adam_step(layers, grads, state, cfg);
    return Network(std::move(layers));
}

Network glorot_network(std::span<const std::size_t> sizes, std::uint64_t seed) {
    if (sizes.size() < 2) {
        throw ShapeError("network needs at least input and output sizes");
    }
    std::vector<Layer> layers;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t fan_in = sizes[l];
        const std::size_t fan_out = sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        RandomStream stream = RandomStream::derive(seed, {l});
        Matrix w(fan_in, fan_out);
        for (double& v : w.data()) v = (2.0 * stream.uniform() - 1.0) * limit;
        const bool last = l + 2 == sizes.size();
        layers.push_back(Layer{std::move(w), Vector(fan_out, 0.0), last ? Activation::Softmax : Activation::Sigmoid});
    }
    return Network(std::move(layers));
}

SplitSizes validation_split(std::size_t n, double fraction) noexcept {
    const auto held = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    return {n - held, held};
}

TrainResult train(const Dataset& data, const TrainConfig& cfg, std::uint64_t init_seed) {
    cfg.validate();
    if (data.empty()) {
        throw ConfigError("cannot train on an empty dataset");
    }
    const SplitSizes split = validation_split(data.size(), cfg.validation_fraction);
    if (split.train == 0) {
        throw ConfigError("validation split leaves no training samples");
    }

    for (std::uint8_t label : data.labels()) {
        if (label >= cfg.classes) {
            throw ConfigError("label " + std::to_string(label) + " out of range for " + std::to_string(cfg.classes) +
                              " classes");
        }
    }
    std::vector<std::size_t> sizes{data.input_size()};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(cfg.classes);

    std::vector<Layer> layers = glorot_network(sizes, init_seed).release_layers();
    AdamState state = AdamState::zeros_like(layers);
    GradientSet grads = GradientSet::zeros_like(layers);
    std::vector<std::size_t> order(split.train);

    TrainHistory history;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        RandomStream shuffle = RandomStream::derive(cfg.shuffle_seed, {epoch});
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle.uniform_below(i)]);
        }

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            grads.set_zero();
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t idx = order[k];
                const SampleResult r = accumulate_gradient(layers, data.input(idx), data.label(idx), grads);
                loss_sum += r.loss;
                if (r.predicted == data.label(idx)) ++correct;
            }
            grads.scale(1.0 / static_cast<double>(end - start));
            adam_step(layers, grads, state, cfg);
        }
        history.train_loss.push_back(loss_sum / static_cast<double>(split.train));
        history.train_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(split.train));

        if (split.validation == 0) {
            history.validation_accuracy.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            const Network snapshot(layers);
            std::size_t val_correct = 0;
            for (std::size_t i = split.train; i < data.size(); ++i) {
                if (predict(snapshot, data.input(i)) == data.label(i)) ++val_correct;
            }
            history.validation_accuracy.push_back(static_cast<double>(val_correct) /
                                                  static_cast<double>(split.validation));
        }
    }
    return TrainResult{Network(std::move(layers)), std::move(history)};
}

}  // namespace noisynet
