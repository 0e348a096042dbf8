#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "noisynet/cli.hpp"
#include "noisynet/mnist.hpp"
#include "noisynet/serialization.hpp"
#include "noisynet/sweep.hpp"

using namespace noisynet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Synthetic 28x28 "digits": class c lights up row band c.
void write_fake_mnist(const fs::path& dir, std::uint32_t n_train, std::uint32_t n_test) {
    fs::create_directories(dir);
    std::mt19937_64 rng(5);
    auto make = [&](std::uint32_t n, const char* images, const char* labels) {
        IdxImages img{n, 28, 28, std::vector<std::uint8_t>(std::size_t{n} * 784)};
        std::vector<std::uint8_t> lab(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            lab[i] = static_cast<std::uint8_t>(rng() % 10);
            for (std::size_t p = 0; p < 784; ++p) {
                const bool on = (p / 28) / 2 == lab[i] + 2;
                img.pixels[i * 784 + p] = static_cast<std::uint8_t>(on ? 200 + rng() % 56 : rng() % 40);
            }
        }
        write_file_atomic(dir / images, encode_idx_images(img));
        write_file_atomic(dir / labels, encode_idx_labels(lab));
    };
    make(n_train, "train-images-idx3-ubyte", "train-labels-idx1-ubyte");
    make(n_test, "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte");
}

struct Workspace {
    fs::path root = fs::temp_directory_path() / "noisynet_cli_test";
    fs::path mnist = root / "mnist";
    Workspace() {
        fs::remove_all(root);
        write_fake_mnist(mnist, 400, 200);
    }
    ~Workspace() { fs::remove_all(root); }
    std::string path(const std::string& name) const { return (root / name).string(); }
};

Workspace& ws() {
    static Workspace w;
    return w;
}

const std::string& trained_net() {
    static const std::string path = [] {
        const std::string p = ws().path("net.json");
        const Outcome o = run_cli({"train", "--mnist-dir", ws().mnist.string(), "--epochs", "5", "--out", p});
        REQUIRE_MESSAGE(o.code == 0, o.err);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("cli: usage errors exit nonzero with a diagnostic") {
    Outcome o = run_cli({});
    CHECK(o.code != 0);
    CHECK_FALSE(o.err.empty());
    o = run_cli({"report", "a.csv", "--bogus"});
    CHECK(o.code != 0);
    CHECK(o.err.find("--bogus") != std::string::npos);
    o = run_cli({"frobnicate"});
    CHECK(o.code != 0);
    o = run_cli({"eval", "--net", ws().path("missing.json"), "--mnist-dir", ws().mnist.string()});
    CHECK(o.code != 0);
    CHECK(o.err.find("missing.json") != std::string::npos);
    o = run_cli({"--help"});
    CHECK(o.code == 0);
    CHECK(o.out.find("sweep") != std::string::npos);
}

TEST_CASE("cli: missing data directory is reported") {
    const char* saved = std::getenv("NOISYNET_MNIST_DIR");
    const std::string keep = saved ? saved : "";
    ::unsetenv("NOISYNET_MNIST_DIR");
    const Outcome o = run_cli({"eval", "--net", trained_net()});
    CHECK(o.code != 0);
    CHECK(o.err.find("NOISYNET_MNIST_DIR") != std::string::npos);
    if (saved) ::setenv("NOISYNET_MNIST_DIR", keep.c_str(), 1);

    const Outcome bad = run_cli({"eval", "--net", trained_net(), "--mnist-dir", ws().path("nowhere")});
    CHECK(bad.code != 0);
}

TEST_CASE("cli: train writes weights and history, reproducibly") {
    const std::string net = trained_net();
    const std::string history = net + ".history.csv";
    REQUIRE(fs::exists(history));
    const std::string h = read_file(history);
    CHECK(h.starts_with("epoch,train_loss,train_acc,val_acc\n"));
    CHECK(std::count(h.begin(), h.end(), '\n') == 6);
    const WeightFile wf = load(net);
    CHECK(wf.network.layer(0).weights.cols() == 20);
    CHECK(wf.meta.seed == 1);
    CHECK(wf.meta.epochs == 5);

    const std::string again = ws().path("net2.json");
    const Outcome o = run_cli({"train", "--mnist-dir", ws().mnist.string(), "--epochs", "5", "--out", again,
                               "--history", ws().path("h2.csv")});
    REQUIRE(o.code == 0);
    CHECK(read_file(again) == read_file(net));
    CHECK(read_file(ws().path("h2.csv")) == h);
}

TEST_CASE("cli: eval prints an accuracy line") {
    const Outcome o = run_cli({"eval", "--net", trained_net(), "--mnist-dir", ws().mnist.string()});
    REQUIRE(o.code == 0);
    CHECK(o.out.starts_with("split=test n=200 accuracy="));
    const Outcome noisy = run_cli({"eval", "--net", trained_net(), "--mnist-dir", ws().mnist.string(), "--noise",
                                   "additive-uncorrelated", "--amplitude", "0.5", "--repeats", "3"});
    REQUIRE(noisy.code == 0);
    CHECK(noisy.out.find("stderr=") != std::string::npos);
}

TEST_CASE("cli: sweep emits one row per grid point and is byte-reproducible") {
    const std::string csv = ws().path("sweep.csv");
    const std::vector<std::string> args{"sweep",   "--net",    trained_net(), "--mnist-dir", ws().mnist.string(),
                                        "--noise", "additive-uncorrelated",   "--layer",     "hidden",
                                        "--grid",  "0:1:0.05", "--repeats",   "10",          "--seed",
                                        "7",       "--out",    csv};
    REQUIRE(run_cli(args).code == 0);
    const std::string first = read_file(csv);
    const auto rows = parse_sweep_csv(first);
    CHECK(rows.size() == 21);
    for (const auto& r : rows) {
        CHECK((r.mean_accuracy >= 0.0 && r.mean_accuracy <= 1.0));
        CHECK(r.stderr_ >= 0.0);
    }
    CHECK(rows[20].amplitude == 1.0);
    const std::string meta = read_file(csv + ".meta.json");
    CHECK(meta.find("network_hash") != std::string::npos);
    CHECK(meta.find("seed=7") != std::string::npos);

    REQUIRE(run_cli(args).code == 0);
    CHECK(read_file(csv) == first);
    CHECK(read_file(csv + ".meta.json") == meta);

    const Outcome to_stdout = run_cli({"sweep", "--net", trained_net(), "--mnist-dir", ws().mnist.string(), "--noise",
                                       "additive-uncorrelated", "--grid", "0:1:0.05", "--seed", "7"});
    CHECK(to_stdout.out == first);
    const Outcome bad_noise = run_cli({"sweep", "--net", trained_net(), "--mnist-dir", ws().mnist.string(), "--noise",
                                       "pink"});
    CHECK(bad_noise.code != 0);
}

TEST_CASE("cli: ghost III removes correlated additive hidden noise") {
    const std::string ghost = ws().path("ghost.json");
    REQUIRE(run_cli({"mitigate", "--net", trained_net(), "--ghost", "III", "--B", "30", "--out", ghost}).code == 0);
    const WeightFile wf = load(ghost);
    REQUIRE(wf.meta.transforms.size() == 1);
    CHECK(wf.meta.transforms[0].variant == "III");
    CHECK(wf.network.layer(0).weights.cols() == 21);

    const Outcome o = run_cli({"sweep", "--net", ghost, "--mnist-dir", ws().mnist.string(), "--noise",
                               "additive-correlated", "--layer", "hidden", "--repeats", "3"});
    REQUIRE(o.code == 0);
    const auto rows = parse_sweep_csv(o.out);
    for (const auto& r : rows) {
        CHECK(r.mean_accuracy == rows[0].mean_accuracy);
        CHECK(r.stderr_ == 0.0);
    }
    CHECK(run_cli({"mitigate", "--net", trained_net(), "--out", ws().path("x.json")}).code != 0);
    CHECK(run_cli({"mitigate", "--net", trained_net(), "--pool", "3", "--ghost", "II", "--out", ws().path("x.json")})
              .code != 0);
}

TEST_CASE("cli: report merges sweeps and writes a plot script") {
    const std::string a = ws().path("a.csv"), b = ws().path("b.csv");
    write_file_atomic(a, "sqrt2D,mean_accuracy,stderr\n0,0.9,0\n1,0.5,0.01\n");
    write_file_atomic(b, "sqrt2D,mean_accuracy,stderr\n0,0.9,0\n1,0.8,0.02\n");
    const std::string merged = ws().path("merged.csv"), plot = ws().path("fig.gp");
    const Outcome o = run_cli({"report", "plain=" + a, "pooled=" + b, "--out", merged, "--plot", plot});
    REQUIRE_MESSAGE(o.code == 0, o.err);
    CHECK(read_file(merged) ==
          "series,sqrt2D,mean_accuracy,stderr\nplain,0,0.9,0\nplain,1,0.5,0.01\npooled,0,0.9,0\npooled,1,0.8,0.02\n");
    const std::string gp = read_file(plot);
    CHECK(gp.find("baseline = 0.9") != std::string::npos);
    CHECK(gp.find("title 'pooled'") != std::string::npos);
    CHECK(run_cli({"report", ws().path("nope.csv")}).code != 0);
}
