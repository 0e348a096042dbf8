#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "noisynet/error.hpp"
#include "noisynet/mnist.hpp"
#include "noisynet/sweep.hpp"
#include "test_support.hpp"

using namespace noisynet;

namespace {

std::string be32(std::uint32_t v) {
    std::string s(4, '\0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (24 - 8 * i)) & 0xff);
    return s;
}

// Two 2x2 images, written by hand.
std::string fixture_images() {
    std::string s = be32(0x803) + be32(2) + be32(2) + be32(2);
    for (unsigned char b : {0, 255, 51, 102, 255, 255, 0, 0}) s.push_back(static_cast<char>(b));
    return s;
}

std::string fixture_labels() { return be32(0x801) + be32(2) + std::string("\x07\x03", 2); }

template <class F>
std::string parse_error_of(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("idx: hand-written fixture decodes to scaled pixels") {
    const IdxImages img = parse_idx_images(fixture_images());
    CHECK(img.count == 2);
    CHECK(img.rows == 2);
    CHECK(img.cols == 2);
    const auto labels = parse_idx_labels(fixture_labels());
    const Dataset d = make_dataset(img, labels, Split::Test);
    REQUIRE(d.size() == 2);
    CHECK(d.input_size() == 4);
    CHECK(d.input(0)[0] == 0.0);
    CHECK(d.input(0)[1] == 1.0);
    CHECK(d.input(0)[2] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(d.input(0)[3] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.label(0) == 7);
    CHECK(d.label(1) == 3);
    CHECK(d.split() == Split::Test);
}

TEST_CASE("idx: defects are reported with their byte offset") {
    std::string bad = fixture_images();
    bad[3] = 0x01;
    auto msg = parse_error_of([&] { (void)parse_idx_images(bad, "img"); });
    CHECK(contains(msg, "bad magic"));
    CHECK(contains(msg, "byte 0"));

    msg = parse_error_of([&] { (void)parse_idx_images(fixture_images().substr(0, 10), "img"); });
    CHECK(contains(msg, "truncated header"));

    msg = parse_error_of([&] { (void)parse_idx_images(fixture_images().substr(0, 20), "img"); });
    CHECK(contains(msg, "truncated payload"));
    CHECK(contains(msg, "byte 20"));

    msg = parse_error_of([&] { (void)parse_idx_images(fixture_images() + "x", "img"); });
    CHECK(contains(msg, "trailing data"));

    msg = parse_error_of([&] { (void)parse_idx_labels(fixture_labels().substr(0, 9), "lbl"); });
    CHECK(contains(msg, "truncated payload"));

    const IdxImages img = parse_idx_images(fixture_images());
    msg = parse_error_of([&] { (void)make_dataset(img, {1}, Split::Train, "lbl"); });
    CHECK(contains(msg, "count mismatch"));

    msg = parse_error_of([&] { (void)make_dataset(img, {1, 12}, Split::Train, "lbl"); });
    CHECK(contains(msg, "out of range"));
    CHECK(contains(msg, "byte 9"));
}

TEST_CASE("idx: encode and decode round-trip") {
    const IdxImages img = parse_idx_images(fixture_images());
    CHECK(encode_idx_images(img) == fixture_images());
    CHECK(encode_idx_labels(parse_idx_labels(fixture_labels())) == fixture_labels());
    const Dataset d = make_dataset(img, parse_idx_labels(fixture_labels()), Split::Train);
    CHECK(to_idx_images(d, 2, 2).pixels == img.pixels);
}

TEST_CASE("idx: files on disk") {
    const auto dir = std::filesystem::temp_directory_path() / "noisynet_test_data";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "t10k-images-idx3-ubyte", std::ios::binary) << fixture_images();
        std::ofstream(dir / "t10k-labels-idx1-ubyte", std::ios::binary) << fixture_labels();
    }
    const Dataset d = load_mnist_dir(dir, Split::Test);
    CHECK(d.size() == 2);
    CHECK_THROWS_AS((void)load_mnist_dir(dir, Split::Train), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("grid parsing") {
    const auto g = default_grid();
    REQUIRE(g.size() == 21);
    CHECK(g.front() == 0.0);
    CHECK(g[3] == 0.15);
    CHECK(g[7] == 0.35);
    CHECK(g.back() == 1.0);
    CHECK(parse_grid("0, 0.5,1") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parse_grid("0:1:0.5") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK_THROWS_AS((void)parse_grid(""), ConfigError);
    CHECK_THROWS_AS((void)parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS((void)parse_grid("0:1:0"), ConfigError);
    CHECK_THROWS_AS((void)parse_grid("a,b"), ConfigError);
}

TEST_CASE("sweep csv: format and parse") {
    SweepResult r;
    r.rows = {{0.0, 0.95, 0.0}, {0.05, 0.9412, 0.00123}};
    const std::string csv = r.to_csv();
    CHECK(csv == "sqrt2D,mean_accuracy,stderr\n0,0.95,0\n0.05,0.9412,0.00123\n");
    const auto rows = parse_sweep_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].amplitude == 0.05);
    CHECK(rows[1].mean_accuracy == 0.9412);
    CHECK(rows[1].stderr_ == 0.00123);
    CHECK(contains(parse_error_of([] { (void)parse_sweep_csv("x,y\n", "f.csv"); }), "f.csv:1"));
    CHECK(contains(parse_error_of([] { (void)parse_sweep_csv("sqrt2D,mean_accuracy,stderr\n1,2\n", "f.csv"); }),
                   "f.csv:2"));
}

TEST_CASE("sweep: zero amplitude reproduces noise-free accuracy") {
    const Network net = testing::random_network({12, 6, 4}, 3);
    const Dataset data = testing::random_dataset(200, 12, 4, 4);
    SweepSpec spec;
    spec.kind = {NoiseMode::Additive, Correlation::Uncorrelated};
    spec.grid = {0.0, 0.5};
    spec.repeats = 4;
    spec.seed = 9;
    const SweepResult r = run_sweep(net, data, spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].mean_accuracy == accuracy(net, data));
    CHECK(r.rows[0].stderr_ == 0.0);
    CHECK(r.rows[1].stderr_ > 0.0);
    CHECK(run_sweep(net, data, spec).to_csv() == r.to_csv());
    spec.threads = 3;
    CHECK(run_sweep(net, data, spec).to_csv() == r.to_csv());
    CHECK(contains(r.provenance_json(), r.network_hash));
    CHECK(contains(r.spec, "additive-uncorrelated"));

    spec.grid = {0.5, 0.2};
    CHECK_THROWS_AS((void)run_sweep(net, data, spec), ConfigError);
    spec.grid = {0.2};
    spec.repeats = 0;
    CHECK_THROWS_AS((void)run_sweep(net, data, spec), ConfigError);
}

TEST_CASE("min accuracy versus pool size") {
    const Network net = testing::random_network({12, 6, 4}, 3);
    const Dataset data = testing::random_dataset(100, 12, 4, 4);
    SweepSpec base;
    base.grid = {0.0, 0.5, 1.0};
    base.repeats = 3;
    const std::vector<std::size_t> ms{1, 2};
    const auto rows = min_accuracy_vs_m(net, data, {NoiseMode::Additive, Correlation::Uncorrelated}, ms, base);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].m == 1);
    CHECK(rows[0].min_accuracy <= accuracy(net, data));
    CHECK(min_accuracy_csv(rows).starts_with("m,sqrt2D,min_accuracy,stderr\n"));
    CHECK_THROWS_AS((void)min_accuracy_vs_m(net, data, {NoiseMode::Additive, Correlation::Correlated}, ms, base),
                    ConfigError);
}
