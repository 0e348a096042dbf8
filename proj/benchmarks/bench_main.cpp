#include <benchmark/benchmark.h>

#include <random>

#include "noisynet/linalg.hpp"
#include "noisynet/noise.hpp"
#include "noisynet/random.hpp"
#include "noisynet/training.hpp"

using namespace noisynet;

namespace {

Vector uniform_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = u(rng);
    return v;
}

Network mnist_net(std::uint64_t seed) {
    const std::size_t sizes[] = {kMnistInputs, 20, kMnistClasses};
    return glorot_network(sizes, seed);
}

Dataset fake_dataset(std::size_t n) {
    Vector pixels = uniform_vector(n * kMnistInputs, 3);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint8_t>(i % 10);
    return Dataset(kMnistInputs, std::move(pixels), std::move(labels), Split::Test);
}

void BM_Matvec(benchmark::State& state) {
    const auto cols = static_cast<std::size_t>(state.range(0));
    Matrix w(kMnistInputs, cols, uniform_vector(kMnistInputs * cols, 1));
    const Vector y = uniform_vector(kMnistInputs, 2);
    for (auto _ : state) benchmark::DoNotOptimize(matvec(w, y));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kMnistInputs * cols));
}
BENCHMARK(BM_Matvec)->Arg(20)->Arg(60)->Arg(400);

void BM_Forward(benchmark::State& state) {
    const Network net = mnist_net(1);
    const Vector x = uniform_vector(kMnistInputs, 2);
    for (auto _ : state) benchmark::DoNotOptimize(forward_output(net, x));
}
BENCHMARK(BM_Forward);

void BM_Gaussian(benchmark::State& state) {
    RandomStream s(42, 0);
    for (auto _ : state) benchmark::DoNotOptimize(s.gaussian());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Gaussian);

void BM_NoisyAccuracy(benchmark::State& state) {
    const Network net = mnist_net(1);
    const Dataset data = fake_dataset(1000);
    NoiseConfig cfg;
    cfg.seed = 7;
    cfg.sources.push_back(
        NoiseSource::from_amplitude({NoiseMode::Additive, Correlation::Uncorrelated}, 1, 0.5));
    const auto repeats = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(noisy_accuracy(net, data, cfg, repeats));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size() * repeats));
}
BENCHMARK(BM_NoisyAccuracy)->Arg(1)->Arg(10);

void BM_Backprop(benchmark::State& state) {
    const Network net = mnist_net(1);
    const Vector x = uniform_vector(kMnistInputs, 2);
    for (auto _ : state) benchmark::DoNotOptimize(backprop(net, x, 3));
}
BENCHMARK(BM_Backprop);

}  // namespace
BENCHMARK_MAIN();
