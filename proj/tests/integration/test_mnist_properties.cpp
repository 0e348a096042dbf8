#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "noisynet/mnist.hpp"
#include "noisynet/noise.hpp"
#include "noisynet/training.hpp"

using namespace noisynet;

namespace {

std::filesystem::path mnist_dir() {
    const char* env = std::getenv("NOISYNET_MNIST_DIR");
    return env ? std::filesystem::path(env) : std::filesystem::path("data/mnist");
}

const Dataset& train_set() {
    static const Dataset d = load_mnist_dir(mnist_dir(), Split::Train);
    return d;
}

const Dataset& test_set() {
    static const Dataset d = load_mnist_dir(mnist_dir(), Split::Test);
    return d;
}

const TrainResult& small_run() {
    static const TrainResult r = [] {
        TrainConfig cfg;
        return train(train_set().slice(0, 10'000), cfg, 1);
    }();
    return r;
}

}  // namespace

TEST_CASE("mnist files have the official sizes") {
    REQUIRE(std::filesystem::exists(mnist_dir()));
    CHECK(train_set().size() == 60'000);
    CHECK(test_set().size() == 10'000);
    CHECK(train_set().input_size() == 784);
    for (double v : test_set().input(0)) REQUIRE((v >= 0.0 && v <= 1.0));
}

TEST_CASE("training loss decreases across epochs") {
    const auto& loss = small_run().history.train_loss;
    REQUIRE(loss.size() == 20);
    int decreases = 0;
    for (std::size_t e = 1; e < loss.size(); ++e) decreases += loss[e] < loss[e - 1];
    CHECK(decreases >= 17);
    CHECK(loss.back() < 0.5 * loss.front());
    CHECK(accuracy(small_run().network, test_set()) > 0.88);
}

TEST_CASE("hidden additive noise degrades accuracy monotonically") {
    const Network& net = small_run().network;
    const Dataset data = test_set().slice(0, 2000);
    double previous = accuracy(net, data), previous_se = 0.0;
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
        NoiseConfig cfg;
        cfg.seed = 11;
        cfg.sources.push_back(NoiseSource::from_amplitude({NoiseMode::Additive, Correlation::Uncorrelated}, 1, a));
        const NoisyAccuracy acc = noisy_accuracy(net, data, cfg, 5);
        CHECK(acc.mean <= previous + 3.0 * std::hypot(acc.stderr_, previous_se));
        previous = acc.mean;
        previous_se = acc.stderr_;
    }
}
