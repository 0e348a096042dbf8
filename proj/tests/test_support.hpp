#pragma once

// Shared helpers for the unit tests: small random networks and inputs built from a
// std::mt19937_64 so they stay independent of the library's own random streams.

#include <cstdint>
#include <random>
#include <vector>

#include "noisynet/network.hpp"

namespace noisynet::testing {

inline Network random_network(std::vector<std::size_t> sizes, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<Layer> layers;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Matrix w(sizes[l], sizes[l + 1]);
        for (double& v : w.data()) v = dist(rng);
        Vector b(sizes[l + 1]);
        for (double& v : b) v = dist(rng);
        const bool last = l + 2 == sizes.size();
        layers.push_back(Layer{std::move(w), std::move(b), last ? Activation::Softmax : Activation::Sigmoid});
    }
    return Network(std::move(layers));
}

inline Vector random_input(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline Dataset random_dataset(std::size_t n, std::size_t input_size, std::size_t classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> inputs(n * input_size);
    for (double& x : inputs) x = dist(rng);
    std::vector<std::uint8_t> labels(n);
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng() % classes);
    return Dataset(input_size, std::move(inputs), std::move(labels), Split::Test);
}

}  // namespace noisynet::testing
