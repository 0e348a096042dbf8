#include "noisynet/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noisynet/error.hpp"
#include "noisynet/format.hpp"
#include "noisynet/serialization.hpp"

namespace noisynet {
namespace {

double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("invalid number \"" + std::string(s) + "\" in " + std::string(what));
    }
    return v;
}

int decimals(std::string_view s) {
    const auto dot = s.find('.');
    if (dot == std::string_view::npos || s.find_first_of("eE") != std::string_view::npos) return 0;
    return static_cast<int>(s.size() - dot - 1);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

void SweepSpec::validate() const {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) throw ConfigError("sweep grid values must be finite and >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly ascending");
    }
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
}

std::string SweepSpec::describe() const {
    std::string s = "noise=" + to_string(kind) + " layer=" + std::to_string(layer) + " repeats=" +
                    std::to_string(repeats) + " seed=" + std::to_string(seed) + " grid=";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) s += ',';
        s += format_double(grid[i]);
    }
    if (const auto* p = std::get_if<PoolSpec>(&mitigation)) {
        s += " pool_m=" + std::to_string(p->m);
    } else if (const auto* g = std::get_if<GhostSpec>(&mitigation)) {
        s += " ghost=" + std::string(to_string(g->variant));
        if (g->variant == GhostVariant::III) s += " B=" + format_double(g->bias_magnitude);
    }
    return s;
}

std::string SweepResult::to_csv() const {
    std::string out = "sqrt2D,mean_accuracy,stderr\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.amplitude) + ',' + format_double(r.mean_accuracy) + ',' + format_double(r.stderr_) + '\n';
    }
    return out;
}

std::string SweepResult::provenance_json() const {
    const nlohmann::json j{{"network_hash", network_hash}, {"seed", seed}, {"spec", spec}};
    return j.dump(2) + "\n";
}

std::vector<double> default_grid() { return parse_grid("0:1:0.05"); }

std::vector<double> parse_grid(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ConfigError("empty grid");
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        while (true) {
            const auto next = text.find(':', pos);
            parts.push_back(trim(text.substr(pos, next - pos)));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        if (parts.size() != 3) throw ConfigError("grid range must be start:stop:step");
        const double start = parse_number(parts[0], "grid start");
        const double stop = parse_number(parts[1], "grid stop");
        const double step = parse_number(parts[2], "grid step");
        if (!(step > 0.0) || stop < start) throw ConfigError("grid range needs step > 0 and stop >= start");
        const int places = std::max({decimals(parts[0]), decimals(parts[1]), decimals(parts[2])});
        const double unit = std::pow(10.0, places);
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            const double v = start + static_cast<double>(i) * step;
            out.push_back(places > 0 ? std::round(v * unit) / unit : v);
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto next = text.find(',', pos);
            out.push_back(parse_number(trim(text.substr(pos, next - pos)), "grid list"));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
    }
    return out;
}

Network apply_mitigation(const Network& net, const Mitigation& mitigation) {
    if (const auto* p = std::get_if<PoolSpec>(&mitigation)) return pool_transform(net, *p);
    if (const auto* g = std::get_if<GhostSpec>(&mitigation)) return ghost_transform(net, *g);
    return net;
}

SweepResult run_sweep(const Network& net, const Dataset& data, const SweepSpec& spec) {
    spec.validate();
    const Network target = apply_mitigation(net, spec.mitigation);
    SweepResult result;
    result.network_hash = fnv1a_hex(to_json(net));
    result.seed = spec.seed;
    result.spec = spec.describe();
    for (double amplitude : spec.grid) {
        NoiseConfig cfg;
        cfg.seed = spec.seed;
        cfg.sources.push_back(NoiseSource::from_amplitude(spec.kind, spec.layer, amplitude));
        const NoisyAccuracy acc = noisy_accuracy(target, data, cfg, spec.repeats, spec.threads);
        result.rows.push_back({amplitude, acc.mean, acc.stderr_});
    }
    return result;
}

std::vector<MinAccuracyRow> min_accuracy_vs_m(const Network& net, const Dataset& data, NoiseKind kind,
                                              std::span<const std::size_t> ms, const SweepSpec& base) {
    if (kind.correlation != Correlation::Uncorrelated) {
        throw ConfigError("min_accuracy_vs_m applies to uncorrelated noise");
    }
    std::vector<MinAccuracyRow> out;
    for (std::size_t m : ms) {
        SweepSpec spec = base;
        spec.kind = kind;
        spec.mitigation = PoolSpec{m, spec.layer};
        const SweepResult r = run_sweep(net, data, spec);
        const auto worst = std::min_element(r.rows.begin(), r.rows.end(), [](const SweepRow& a, const SweepRow& b) {
            return a.mean_accuracy < b.mean_accuracy;
        });
        out.push_back({m, worst->amplitude, worst->mean_accuracy, worst->stderr_});
    }
    return out;
}

std::string min_accuracy_csv(std::span<const MinAccuracyRow> rows) {
    std::string out = "m,sqrt2D,min_accuracy,stderr\n";
    for (const MinAccuracyRow& r : rows) {
        out += std::to_string(r.m) + ',' + format_double(r.amplitude) + ',' + format_double(r.min_accuracy) + ',' +
               format_double(r.stderr_) + '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view l = trim(line);
        if (lineno == 1) {
            if (l != "sqrt2D,mean_accuracy,stderr") {
                throw ParseError(source + ":1: expected header sqrt2D,mean_accuracy,stderr");
            }
            continue;
        }
        if (l.empty()) continue;
        double values[3];
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            const auto next = l.find(',', pos);
            if ((k < 2) == (next == std::string_view::npos)) {
                throw ParseError(source + ":" + std::to_string(lineno) + ": expected 3 columns");
            }
            try {
                values[k] = parse_number(l.substr(pos, next - pos), "csv");
            } catch (const ConfigError& e) {
                throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
            }
            pos = next + 1;
        }
        rows.push_back({values[0], values[1], values[2]});
    }
    if (lineno == 0) throw ParseError(source + ": empty file");
    return rows;
}

}  // namespace noisynet
