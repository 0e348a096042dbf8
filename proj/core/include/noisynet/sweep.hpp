#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "noisynet/dataset.hpp"
#include "noisynet/mitigation.hpp"
#include "noisynet/network.hpp"
#include "noisynet/noise.hpp"

namespace noisynet {

using Mitigation = std::variant<std::monostate, PoolSpec, GhostSpec>;

struct SweepSpec {
    NoiseKind kind;
    std::size_t layer = 1;
    std::vector<double> grid;  // noise amplitudes sqrt(2D), ascending, >= 0
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    Mitigation mitigation;
    std::size_t threads = 1;

    void validate() const;
    // One-line human-readable echo used for provenance.
    [[nodiscard]] std::string describe() const;
};

struct SweepRow {
    double amplitude = 0.0;
    double mean_accuracy = 0.0;
    double stderr_ = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string network_hash;  // FNV-1a of the network's weight-file text
    std::uint64_t seed = 0;
    std::string spec;

    // "sqrt2D,mean_accuracy,stderr" with shortest round-trip decimals and LF endings.
    [[nodiscard]] std::string to_csv() const;
    // {"network_hash":...,"seed":...,"spec":...} for the sidecar file.
    [[nodiscard]] std::string provenance_json() const;
};

// Default grid 0, 0.05, ..., 1.
[[nodiscard]] std::vector<double> default_grid();

// "start:stop:step" (inclusive, each point rounded to the decimals written in the
// arguments) or a comma-separated list. Throws ConfigError on malformed input.
[[nodiscard]] std::vector<double> parse_grid(std::string_view text);

// Applies the mitigation (if any), then one noise source per grid point with
// D = a^2 / 2, evaluated by noisy_accuracy. Rows are in grid order.
[[nodiscard]] SweepResult run_sweep(const Network& net, const Dataset& data, const SweepSpec& spec);

[[nodiscard]] Network apply_mitigation(const Network& net, const Mitigation& mitigation);

struct MinAccuracyRow {
    std::size_t m = 1;
    double amplitude = 0.0;  // grid point where the minimum occurred
    double min_accuracy = 0.0;
    double stderr_ = 0.0;
};

// Pooled sweeps for every m (uncorrelated noise only); each row holds the minimum over the grid.
[[nodiscard]] std::vector<MinAccuracyRow> min_accuracy_vs_m(const Network& net, const Dataset& data, NoiseKind kind,
                                                            std::span<const std::size_t> ms, const SweepSpec& base);

[[nodiscard]] std::string min_accuracy_csv(std::span<const MinAccuracyRow> rows);

// Parses a sweep CSV produced by SweepResult::to_csv. Throws ParseError with the line number.
[[nodiscard]] std::vector<SweepRow> parse_sweep_csv(const std::string& text, const std::string& source = "<csv>");

}  // namespace noisynet
