#include "noisynet/network.hpp"

#include <string>
#include <utility>

#include "noisynet/activations.hpp"
#include "noisynet/error.hpp"

namespace noisynet {

std::string_view to_string(Activation a) noexcept { return a == Activation::Sigmoid ? "sigmoid" : "softmax"; }

std::optional<Activation> parse_activation(std::string_view name) noexcept {
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "softmax") return Activation::Softmax;
    return std::nullopt;
}

void activate_inplace(Activation a, std::span<double> x) {
    switch (a) {
        case Activation::Sigmoid:
            sigmoid_inplace(x);
            break;
        case Activation::Softmax:
            softmax_inplace(x);
            break;
    }
}

Vector Layer::preactivate(std::span<const double> y) const {
    Vector x = biases;
    matvec_accumulate(weights, y, x);
    return x;
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw ShapeError("network has no layers");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& l = layers_[i];
        const std::string where = "layer " + std::to_string(i);
        if (l.biases.size() != l.fan_out()) {
            throw ShapeError(where + ": biases length " + std::to_string(l.biases.size()) + " != weights cols " +
                             std::to_string(l.fan_out()));
        }
        if (l.fan_in() == 0 || l.fan_out() == 0) {
            throw ShapeError(where + ": empty weight matrix");
        }
        if (i > 0 && layers_[i - 1].fan_out() != l.fan_in()) {
            throw ShapeError(where + ": fan-in " + std::to_string(l.fan_in()) + " != previous fan-out " +
                             std::to_string(layers_[i - 1].fan_out()));
        }
        if (!l.weights.all_finite() || !all_finite(l.biases)) {
            throw ShapeError(where + ": non-finite parameter");
        }
    }
}

std::size_t Network::input_size() const noexcept { return layers_.empty() ? 0 : layers_.front().fan_in(); }
std::size_t Network::output_size() const noexcept { return layers_.empty() ? 0 : layers_.back().fan_out(); }

std::size_t Network::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const Layer& l : layers_) {
        n += l.weights.size() + l.biases.size();
    }
    return n;
}

Network zero_network(std::span<const std::size_t> sizes) {
    if (sizes.size() < 2) {
        throw ShapeError("zero_network needs at least input and output sizes");
    }
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const bool last = i + 2 == sizes.size();
        layers.push_back(Layer{Matrix(sizes[i], sizes[i + 1]), Vector(sizes[i + 1], 0.0),
                               last ? Activation::Softmax : Activation::Sigmoid});
    }
    return Network(std::move(layers));
}

namespace {

void check_input(const Network& net, std::span<const double> input) {
    if (input.size() != net.input_size()) {
        throw ShapeError("input of length " + std::to_string(input.size()) + " for network expecting " +
                         std::to_string(net.input_size()));
    }
}

}  // namespace

ForwardTrace forward(const Network& net, std::span<const double> input) {
    check_input(net, input);
    ForwardTrace trace;
    trace.preactivations.reserve(net.depth());
    trace.activations.reserve(net.depth());
    std::span<const double> y = input;
    for (const Layer& layer : net.layers()) {
        trace.preactivations.push_back(layer.preactivate(y));
        Vector a = trace.preactivations.back();
        activate_inplace(layer.activation, a);
        trace.activations.push_back(std::move(a));
        y = trace.activations.back();
    }
    return trace;
}

Vector forward_output(const Network& net, std::span<const double> input) {
    check_input(net, input);
    Vector y(input.begin(), input.end());
    for (const Layer& layer : net.layers()) {
        Vector x = layer.preactivate(y);
        activate_inplace(layer.activation, x);
        y = std::move(x);
    }
    return y;
}

std::size_t predict(const Network& net, std::span<const double> input) { return argmax(forward_output(net, input)); }

double accuracy(const Network& net, const Dataset& data) {
    if (data.empty()) {
        throw ConfigError("accuracy of an empty dataset");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (predict(net, data.input(i)) == data.label(i)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace noisynet
