#include "noisynet/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "noisynet/error.hpp"
#include "noisynet/format.hpp"
#include "noisynet/mitigation.hpp"
#include "noisynet/mnist.hpp"
#include "noisynet/serialization.hpp"
#include "noisynet/sweep.hpp"
#include "noisynet/training.hpp"

namespace noisynet::cli {
namespace {

namespace fs = std::filesystem;

struct DataOptions {
    std::string mnist_dir;
    std::string split = "test";
    std::size_t limit = 0;  // 0 = all samples
};

void add_data_options(CLI::App& cmd, DataOptions& o) {
    cmd.add_option("--mnist-dir", o.mnist_dir, "Directory with the MNIST IDX files (default: $NOISYNET_MNIST_DIR)");
    cmd.add_option("--split", o.split, "Evaluation split")->check(CLI::IsMember({"train", "test"}));
    cmd.add_option("--limit", o.limit, "Use only the first N samples (0 = all)");
}

fs::path resolve_mnist_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("NOISYNET_MNIST_DIR"); env && *env) return env;
    throw ConfigError("no MNIST directory: pass --mnist-dir or set NOISYNET_MNIST_DIR");
}

Dataset load_split(const std::string& dir_flag, Split split, std::size_t limit) {
    Dataset d = load_mnist_dir(resolve_mnist_dir(dir_flag), split);
    if (limit > 0 && limit < d.size()) d = d.slice(0, limit);
    return d;
}

Split parse_split(const std::string& s) { return s == "train" ? Split::Train : Split::Test; }

// "hidden" -> 1, "output" -> depth, otherwise a 1-based layer number.
std::size_t resolve_layer(const std::string& text, const Network& net) {
    if (text == "hidden") return 1;
    if (text == "output") return net.depth();
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || v < 1 || v > net.depth()) {
        throw ConfigError("--layer must be hidden, output or a layer number in [1, " + std::to_string(net.depth()) +
                          "], got \"" + text + "\"");
    }
    return v;
}

NoiseKind resolve_noise(const std::string& text) {
    const auto k = parse_noise_kind(text);
    if (!k) throw ConfigError("unknown noise kind \"" + text + "\"");
    return *k;
}

struct MitigationOptions {
    std::size_t pool = 0;
    std::string ghost;
    double bias = 30.0;
};

void add_mitigation_options(CLI::App& cmd, MitigationOptions& o) {
    auto* pool = cmd.add_option("--pool", o.pool, "Neuron pooling with m replicas");
    auto* ghost = cmd.add_option("--ghost", o.ghost, "Ghost neuron variant (I, II, III)");
    cmd.add_option("--B", o.bias, "Ghost III bias magnitude");
    pool->excludes(ghost);
}

// Mitigation target layer is the noisy layer; pooling and ghosts need a following layer.
Mitigation resolve_mitigation(const MitigationOptions& o, std::size_t layer) {
    if (o.pool > 0) return PoolSpec{o.pool, layer};
    if (!o.ghost.empty()) {
        const auto v = parse_ghost_variant(o.ghost);
        if (!v) throw ConfigError("unknown ghost variant \"" + o.ghost + "\"");
        return GhostSpec{*v, o.bias, layer};
    }
    return std::monostate{};
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

// --- train ---------------------------------------------------------------

struct TrainOptions {
    DataOptions data;
    std::uint64_t seed = 1;
    std::uint64_t shuffle_seed = 0;
    std::size_t epochs = 20;
    std::size_t hidden = 20;
    double validation = 0.05;
    std::string out;
    std::string history;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
    const Dataset train_set = load_split(o.data.mnist_dir, Split::Train, o.data.limit);
    TrainConfig cfg;
    cfg.hidden = {o.hidden};
    cfg.epochs = o.epochs;
    cfg.validation_fraction = o.validation;
    cfg.shuffle_seed = o.shuffle_seed;
    const TrainResult r = train(train_set, cfg, o.seed);
    save(o.out, r.network, WeightMeta{o.seed, o.epochs, {}});
    write_file_atomic(o.history.empty() ? o.out + ".history.csv" : o.history, r.history.to_csv());
    const Dataset test_set = load_split(o.data.mnist_dir, Split::Test, 0);
    out << "train_accuracy=" << format_double(accuracy(r.network, train_set))
        << " test_accuracy=" << format_double(accuracy(r.network, test_set)) << '\n';
    return 0;
}

// --- eval ----------------------------------------------------------------

struct EvalOptions {
    DataOptions data;
    std::string net;
    std::string noise;
    std::string layer = "hidden";
    double amplitude = 0.0;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const WeightFile wf = load(o.net);
    const Dataset data = load_split(o.data.mnist_dir, parse_split(o.data.split), o.data.limit);
    out << "split=" << o.data.split << " n=" << data.size();
    if (o.noise.empty()) {
        out << " accuracy=" << format_double(accuracy(wf.network, data)) << '\n';
        return 0;
    }
    NoiseConfig cfg;
    cfg.seed = o.seed;
    cfg.sources.push_back(
        NoiseSource::from_amplitude(resolve_noise(o.noise), resolve_layer(o.layer, wf.network), o.amplitude));
    const NoisyAccuracy acc = noisy_accuracy(wf.network, data, cfg, o.repeats, o.threads);
    out << " noise=" << o.noise << " layer=" << o.layer << " sqrt2D=" << format_double(o.amplitude)
        << " repeats=" << o.repeats << " accuracy=" << format_double(acc.mean)
        << " stderr=" << format_double(acc.stderr_) << '\n';
    return 0;
}

// --- sweep ---------------------------------------------------------------

struct SweepOptions {
    DataOptions data;
    MitigationOptions mitigation;
    std::string net;
    std::string noise;
    std::string layer = "hidden";
    std::string grid = "0:1:0.05";
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string out;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
    const WeightFile wf = load(o.net);
    const Dataset data = load_split(o.data.mnist_dir, parse_split(o.data.split), o.data.limit);
    SweepSpec spec;
    spec.kind = resolve_noise(o.noise);
    spec.layer = resolve_layer(o.layer, wf.network);
    spec.grid = parse_grid(o.grid);
    spec.repeats = o.repeats;
    spec.seed = o.seed;
    spec.threads = std::max<std::size_t>(o.threads, 1);
    spec.mitigation = resolve_mitigation(o.mitigation, spec.layer);
    SweepResult r = run_sweep(wf.network, data, spec);
    r.spec += " split=" + o.data.split + " n=" + std::to_string(data.size());
    write_or_print(o.out, r.to_csv(), out);
    if (!o.out.empty() && o.out != "-") write_file_atomic(o.out + ".meta.json", r.provenance_json());
    return 0;
}

// --- mitigate ------------------------------------------------------------

struct MitigateOptions {
    MitigationOptions mitigation;
    std::string net;
    std::size_t layer = 1;
    std::string out;
};

int cmd_mitigate(const MitigateOptions& o, std::ostream& out) {
    WeightFile wf = load(o.net);
    const Mitigation m = resolve_mitigation(o.mitigation, o.layer);
    TransformRecord record;
    if (const auto* p = std::get_if<PoolSpec>(&m)) {
        record = to_record(*p);
    } else if (const auto* g = std::get_if<GhostSpec>(&m)) {
        record = to_record(*g);
    } else {
        throw ConfigError("mitigate needs --pool M or --ghost VARIANT");
    }
    const Network transformed = apply_mitigation(wf.network, m);
    wf.meta.transforms.push_back(record);
    save(o.out, transformed, wf.meta);
    out << "wrote " << o.out << " (" << transformed.parameter_count() << " parameters)\n";
    return 0;
}

// --- report --------------------------------------------------------------

struct ReportOptions {
    std::vector<std::string> inputs;  // label=path
    std::string out;
    std::string plot;
    std::optional<double> baseline;
    std::string title = "accuracy vs noise amplitude";
};

std::string gnuplot_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') q += "''";
        else q += c;
    }
    return q + "'";
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
    std::vector<std::pair<std::string, std::string>> series;
    for (const std::string& in : o.inputs) {
        const auto eq = in.find('=');
        if (eq == std::string::npos) {
            series.emplace_back(fs::path(in).stem().string(), in);
        } else {
            series.emplace_back(in.substr(0, eq), in.substr(eq + 1));
        }
    }
    std::string merged = "series,sqrt2D,mean_accuracy,stderr\n";
    std::optional<double> baseline = o.baseline;
    for (const auto& [label, path] : series) {
        if (label.find(',') != std::string::npos) throw ConfigError("series label must not contain ',': " + label);
        const auto rows = parse_sweep_csv(read_file(path), path);
        for (const SweepRow& r : rows) {
            merged += label + ',' + format_double(r.amplitude) + ',' + format_double(r.mean_accuracy) + ',' +
                      format_double(r.stderr_) + '\n';
            if (!baseline && r.amplitude == 0.0) baseline = r.mean_accuracy;
        }
    }
    write_or_print(o.out, merged, out);

    if (!o.plot.empty()) {
        std::string gp;
        gp += "# gnuplot script; run: gnuplot -p " + fs::path(o.plot).filename().string() + "\n";
        gp += "set datafile separator ','\n";
        gp += "set title " + gnuplot_quote(o.title) + "\n";
        gp += "set xlabel 'noise amplitude sqrt(2D)'\n";
        gp += "set ylabel 'accuracy'\n";
        gp += "set xrange [0:*]\nset yrange [0:1]\nset key bottom left\n";
        if (baseline) gp += "baseline = " + format_double(*baseline) + "\n";
        gp += "plot ";
        bool first = true;
        if (baseline) {
            gp += "baseline with lines dashtype 2 lc rgb 'black' title 'noise-free'";
            first = false;
        }
        for (const auto& [label, path] : series) {
            if (!first) gp += ", \\\n     ";
            gp += gnuplot_quote(path) + " skip 1 using 1:2:3 with yerrorlines title " + gnuplot_quote(label);
            first = false;
        }
        gp += "\n";
        write_file_atomic(o.plot, gp);
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Noise effects and mitigation in a trained MNIST network", "noisynet"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    TrainOptions train_o;
    auto* train_cmd = app.add_subcommand("train", "Train the 784-20-10 network on MNIST");
    add_data_options(*train_cmd, train_o.data);
    train_cmd->add_option("--seed", train_o.seed, "Weight initialisation seed");
    train_cmd->add_option("--shuffle-seed", train_o.shuffle_seed, "Minibatch shuffle seed");
    train_cmd->add_option("--epochs", train_o.epochs)->check(CLI::PositiveNumber);
    train_cmd->add_option("--hidden", train_o.hidden, "Hidden layer width")->check(CLI::PositiveNumber);
    train_cmd->add_option("--validation", train_o.validation, "Held-out fraction of the training set");
    train_cmd->add_option("--out", train_o.out, "Weight file to write")->required();
    train_cmd->add_option("--history", train_o.history, "History CSV (default: <out>.history.csv)");

    EvalOptions eval_o;
    auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a weight file, optionally under noise");
    add_data_options(*eval_cmd, eval_o.data);
    eval_cmd->add_option("--net", eval_o.net, "Weight file")->required();
    eval_cmd->add_option("--noise", eval_o.noise, "Noise kind, e.g. additive-uncorrelated");
    eval_cmd->add_option("--layer", eval_o.layer, "hidden, output or a 1-based layer number");
    eval_cmd->add_option("--amplitude", eval_o.amplitude, "Noise amplitude sqrt(2D)");
    eval_cmd->add_option("--repeats", eval_o.repeats)->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", eval_o.seed, "Noise seed");
    eval_cmd->add_option("--threads", eval_o.threads);

    SweepOptions sweep_o;
    auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy over a grid of noise amplitudes (CSV)");
    add_data_options(*sweep_cmd, sweep_o.data);
    add_mitigation_options(*sweep_cmd, sweep_o.mitigation);
    sweep_cmd->add_option("--net", sweep_o.net, "Weight file")->required();
    sweep_cmd->add_option("--noise", sweep_o.noise, "Noise kind, e.g. additive-correlated")->required();
    sweep_cmd->add_option("--layer", sweep_o.layer, "hidden, output or a 1-based layer number");
    sweep_cmd->add_option("--grid", sweep_o.grid, "start:stop:step or a comma list of sqrt(2D) values");
    sweep_cmd->add_option("--repeats", sweep_o.repeats)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep_o.seed, "Noise seed");
    sweep_cmd->add_option("--threads", sweep_o.threads);
    sweep_cmd->add_option("--out", sweep_o.out, "CSV file (default: stdout); also writes <out>.meta.json");

    MitigateOptions mit_o;
    auto* mit_cmd = app.add_subcommand("mitigate", "Apply pooling or a ghost neuron to a weight file");
    add_mitigation_options(*mit_cmd, mit_o.mitigation);
    mit_cmd->add_option("--net", mit_o.net, "Input weight file")->required();
    mit_cmd->add_option("--layer", mit_o.layer, "Noisy layer (1-based)")->check(CLI::PositiveNumber);
    mit_cmd->add_option("--out", mit_o.out, "Output weight file")->required();

    ReportOptions rep_o;
    auto* rep_cmd = app.add_subcommand("report", "Merge sweep CSVs and emit a gnuplot script");
    rep_cmd->add_option("inputs", rep_o.inputs, "Sweep CSVs as label=path or path")->required();
    rep_cmd->add_option("--out", rep_o.out, "Merged CSV (default: stdout)");
    rep_cmd->add_option("--plot", rep_o.plot, "gnuplot script to write");
    rep_cmd->add_option("--baseline", rep_o.baseline, "Noise-free accuracy line (default: first sqrt2D=0 row)");
    rep_cmd->add_option("--title", rep_o.title);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code != 0) err << "run 'noisynet --help' for usage\n";
        return code;
    }

    try {
        if (*train_cmd) return cmd_train(train_o, out);
        if (*eval_cmd) return cmd_eval(eval_o, out);
        if (*sweep_cmd) return cmd_sweep(sweep_o, out);
        if (*mit_cmd) return cmd_mitigate(mit_o, out);
        if (*rep_cmd) return cmd_report(rep_o, out);
    } catch (const Error& e) {
        err << "noisynet: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "noisynet: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace noisynet::cli
