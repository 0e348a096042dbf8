#include "noisynet/noise.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "noisynet/error.hpp"

namespace noisynet {

std::string to_string(NoiseKind kind) {
    std::string s = kind.mode == NoiseMode::Additive ? "additive" : "multiplicative";
    s += kind.correlation == Correlation::Correlated ? "-correlated" : "-uncorrelated";
    return s;
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept {
    for (NoiseMode mode : {NoiseMode::Additive, NoiseMode::Multiplicative}) {
        for (Correlation corr : {Correlation::Correlated, Correlation::Uncorrelated}) {
            const NoiseKind kind{mode, corr};
            if (to_string(kind) == name) {
                return kind;
            }
        }
    }
    return std::nullopt;
}

void NoiseConfig::validate(const Network& net) const {
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const NoiseSource& s = sources[k];
        if (!(s.intensity >= 0.0) || !std::isfinite(s.intensity)) {
            throw ConfigError("noise source " + std::to_string(k) + ": intensity D must be finite and >= 0");
        }
        if (s.layer < 1 || s.layer > net.depth()) {
            throw ConfigError("noise source " + std::to_string(k) + ": layer " + std::to_string(s.layer) +
                              " outside [1, " + std::to_string(net.depth()) + "]");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (sources[j].kind == s.kind && sources[j].layer == s.layer) {
                throw ConfigError("duplicate " + to_string(s.kind) + " source on layer " + std::to_string(s.layer));
            }
        }
    }
}

RandomStream noise_stream(std::uint64_t seed, const NoiseSource& source, std::uint64_t sample_index,
                          std::uint64_t repeat) {
    const RandomStream base = RandomStream::derive(seed, {source.layer, source.kind.code(), repeat});
    return RandomStream(base.seed(), sample_index);
}

void apply_noise(std::span<double> y, const NoiseSource& source, RandomStream& stream) {
    if (source.intensity == 0.0) {
        return;
    }
    const double amp = source.amplitude();
    const bool additive = source.kind.mode == NoiseMode::Additive;
    if (source.kind.correlation == Correlation::Correlated) {
        const double xi = stream.gaussian();
        for (double& v : y) {
            v = additive ? v + amp * xi : v * (1.0 + amp * xi);
        }
    } else {
        for (double& v : y) {
            const double xi = stream.gaussian();
            v = additive ? v + amp * xi : v * (1.0 + amp * xi);
        }
    }
}

void apply_noise(std::span<double> y, std::span<const NoiseSource> sources, std::span<RandomStream> streams) {
    if (streams.size() != sources.size()) {
        throw ShapeError("apply_noise: " + std::to_string(sources.size()) + " sources but " +
                         std::to_string(streams.size()) + " streams");
    }
    for (NoiseMode pass : {NoiseMode::Multiplicative, NoiseMode::Additive}) {
        for (std::size_t k = 0; k < sources.size(); ++k) {
            if (sources[k].kind.mode == pass) {
                apply_noise(y, sources[k], streams[k]);
            }
        }
    }
}

namespace {

// Applies every source of `cfg` bound to `layer` (1-based).
void apply_layer_noise(std::span<double> y, const NoiseConfig& cfg, std::size_t layer, std::uint64_t sample,
                       std::uint64_t repeat) {
    std::vector<NoiseSource> here;
    std::vector<RandomStream> streams;
    for (const NoiseSource& s : cfg.sources) {
        if (s.layer == layer) {
            here.push_back(s);
            streams.push_back(noise_stream(cfg.seed, s, sample, repeat));
        }
    }
    if (!here.empty()) {
        apply_noise(y, here, streams);
    }
}

// Activation with the layer's noise. Sigmoid layers: N(f(x)). The softmax layer is
// a normalizing readout, so its noise acts on the neuron states it normalizes: softmax(N(x)).
void noisy_activate(const Layer& layer, std::span<double> x, const NoiseConfig& cfg, std::size_t layer_number,
                    std::uint64_t sample, std::uint64_t repeat) {
    if (layer.activation == Activation::Softmax) {
        apply_layer_noise(x, cfg, layer_number, sample, repeat);
        activate_inplace(layer.activation, x);
    } else {
        activate_inplace(layer.activation, x);
        apply_layer_noise(x, cfg, layer_number, sample, repeat);
    }
}

}  // namespace

ForwardTrace noisy_forward(const Network& net, std::span<const double> input, const NoiseConfig& cfg,
                           std::uint64_t sample_index, std::uint64_t repeat) {
    cfg.validate(net);
    if (input.size() != net.input_size()) {
        throw ShapeError("input of length " + std::to_string(input.size()) + " for network expecting " +
                         std::to_string(net.input_size()));
    }
    ForwardTrace trace;
    std::span<const double> y = input;
    for (std::size_t i = 0; i < net.depth(); ++i) {
        const Layer& layer = net.layer(i);
        trace.preactivations.push_back(layer.preactivate(y));
        Vector a = trace.preactivations.back();
        noisy_activate(layer, a, cfg, i + 1, sample_index, repeat);
        trace.activations.push_back(std::move(a));
        y = trace.activations.back();
    }
    return trace;
}

NoisyAccuracy summarize(std::vector<double> per_repeat) {
    NoisyAccuracy out;
    const auto n = static_cast<double>(per_repeat.size());
    if (per_repeat.empty()) {
        return out;
    }
    out.mean = std::accumulate(per_repeat.begin(), per_repeat.end(), 0.0) / n;
    if (per_repeat.size() > 1) {
        double ss = 0.0;
        for (double a : per_repeat) {
            ss += (a - out.mean) * (a - out.mean);
        }
        out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.per_repeat = std::move(per_repeat);
    return out;
}

NoisyAccuracy noisy_accuracy(const Network& net, const Dataset& data, const NoiseConfig& cfg, std::size_t repeats,
                             std::size_t threads) {
    if (repeats < 1) {
        throw ConfigError("noisy_accuracy: repeats must be >= 1");
    }
    if (data.empty()) {
        throw ConfigError("noisy_accuracy: empty dataset");
    }
    if (data.input_size() != net.input_size()) {
        throw ShapeError("dataset input size " + std::to_string(data.input_size()) + " != network input size " +
                         std::to_string(net.input_size()));
    }
    cfg.validate(net);

    // Layers before the first noisy one are deterministic: evaluate them once per
    // sample and replay only the noisy suffix for each repeat.
    std::size_t first_noisy = net.depth() + 1;
    for (const NoiseSource& s : cfg.sources) {
        if (s.intensity > 0.0) first_noisy = std::min(first_noisy, s.layer);
    }
    const std::size_t prefix = first_noisy - 1;  // layers [0, prefix) see no noise

    auto count_range = [&](std::size_t begin, std::size_t end, std::vector<std::size_t>& correct) {
        Vector y;
        for (std::size_t i = begin; i < end; ++i) {
            y.assign(data.input(i).begin(), data.input(i).end());
            for (std::size_t l = 0; l < prefix; ++l) {
                Vector x = net.layer(l).preactivate(y);
                activate_inplace(net.layer(l).activation, x);
                y = std::move(x);
            }
            if (prefix == net.depth()) {
                // Nothing noisy: every repeat sees the same prediction.
                if (argmax(y) == data.label(i)) {
                    for (auto& c : correct) ++c;
                }
                continue;
            }
            // The first noisy layer's preactivation is still noise-free.
            const Vector first = net.layer(prefix).preactivate(y);
            for (std::size_t r = 0; r < repeats; ++r) {
                Vector z = first;
                noisy_activate(net.layer(prefix), z, cfg, prefix + 1, i, r);
                for (std::size_t l = prefix + 1; l < net.depth(); ++l) {
                    Vector x = net.layer(l).preactivate(z);
                    noisy_activate(net.layer(l), x, cfg, l + 1, i, r);
                    z = std::move(x);
                }
                if (argmax(z) == data.label(i)) ++correct[r];
            }
        }
    };

    threads = std::max<std::size_t>(1, std::min(threads, data.size()));
    std::vector<std::vector<std::size_t>> counts(threads, std::vector<std::size_t>(repeats, 0));
    if (threads == 1) {
        count_range(0, data.size(), counts[0]);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (data.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(data.size(), t * chunk);
            const std::size_t end = std::min(data.size(), begin + chunk);
            pool.emplace_back([&, t, begin, end] { count_range(begin, end, counts[t]); });
        }
    }

    std::vector<double> per_repeat(repeats);
    std::size_t total = 0;
    for (std::size_t r = 0; r < repeats; ++r) {
        std::size_t c = 0;
        for (const auto& tc : counts) c += tc[r];
        total += c;
        per_repeat[r] = static_cast<double>(c) / static_cast<double>(data.size());
    }
    NoisyAccuracy out = summarize(std::move(per_repeat));
    // Exact ratio of integers, so equal per-repeat counts give mean == count / N bit-for-bit.
    out.mean = static_cast<double>(total) / static_cast<double>(data.size() * repeats);
    if (std::all_of(out.per_repeat.begin(), out.per_repeat.end(),
                    [&](double a) { return a == out.per_repeat.front(); })) {
        out.stderr_ = 0.0;
    }
    return out;
}

}  // namespace noisynet
