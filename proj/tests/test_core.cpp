#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "oddm/core.hpp"

using namespace oddm;

TEST_CASE("make_config accepts the Table-I style parameter set") {
    const auto cfg = make_config({{"M", "512"},
                                  {"N", "64"},
                                  {"delta_f", "15e3"},
                                  {"Q", "20"},
                                  {"rolloff", "0.1"},
                                  {"L", "25"},
                                  {"K", "3"}});
    CHECK(cfg.M == 512);
    CHECK(cfg.T() == doctest::Approx(1.0 / 15e3));
    // CP of 3.125 us at rate M/T = 7.68 MHz is L-1 = 24 samples
    CHECK(std::lround(3.125e-6 / cfg.sample_interval()) == cfg.L - 1);
}

TEST_CASE("make_config rejects invariant violations by name") {
    auto kv = std::map<std::string, std::string>{{"M", "16"},     {"N", "16"}, {"delta_f", "15e3"},
                                                 {"Q", "8"},      {"rolloff", "0.1"}, {"L", "4"},
                                                 {"K", "3"}};
    CHECK_THROWS_WITH_AS(make_config(kv), "config: 2Q >= M", std::invalid_argument);
    kv["M"] = "64";
    kv["K"] = "8";
    CHECK_THROWS_WITH_AS(make_config(kv), "config: K >= N/2", std::invalid_argument);
    kv.erase("K");
    CHECK_THROWS_AS(make_config(kv), std::invalid_argument);   // missing key
}

TEST_CASE("derived quantities are consistent") {
    SimConfig cfg;
    cfg.validate();
    CHECK(cfg.sample_interval() * cfg.M * cfg.delta_f == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cfg.doppler_resolution() == doctest::Approx(1.0 / (cfg.N * cfg.T())));
}

TEST_CASE("config text parsing: comments, whitespace, errors") {
    const auto kv = parse_config_text("# comment\n M = 64 \nN=16  # trailing\n\nseed = 7\n");
    CHECK(kv.at("M") == "64");
    CHECK(kv.at("N") == "16");
    CHECK(kv.at("seed") == "7");
    CHECK_THROWS_AS(parse_config_text("novalue\n"), std::invalid_argument);
}

TEST_CASE("4-QAM Gray map matches the fixed labelling") {
    const Constellation c = Constellation::qam4();
    const double s = 1.0 / std::sqrt(2.0);
    const std::uint8_t b00[2] = {0, 0}, b01[2] = {0, 1}, b11[2] = {1, 1}, b10[2] = {1, 0};
    CHECK(c.points[c.map_bits(b00)] == cplx(s, s));
    CHECK(c.points[c.map_bits(b01)] == cplx(-s, s));
    CHECK(c.points[c.map_bits(b11)] == cplx(-s, -s));
    CHECK(c.points[c.map_bits(b10)] == cplx(s, -s));
    double e = 0.0;
    for (const cplx& p : c.points) e += std::norm(p);
    CHECK(e / c.size() == doctest::Approx(1.0));
}

TEST_CASE("map_bits: all-zero input gives the Gray zero point everywhere") {
    const Constellation c = Constellation::qam4();
    const DDFrame f = map_bits(std::vector<std::uint8_t>(4 * 4 * 2, 0), c, 4, 4);
    for (const cplx& v : f.data) CHECK(v == c.points[0]);
}

TEST_CASE("demap(map(bits)) is the identity") {
    const Constellation c = Constellation::qam4();
    const auto bits = test::random_bits(11, 8 * 4 * 2);
    const DDFrame f = map_bits(bits, c, 8, 4);
    CHECK(demap_frame(f, c) == bits);
}

TEST_CASE("map_bits rejects wrong bit count") {
    const Constellation c = Constellation::qam4();
    CHECK_THROWS_AS(map_bits(std::vector<std::uint8_t>(7, 0), c, 2, 2), std::invalid_argument);
}

TEST_CASE("random frames have unit average energy") {
    const Constellation c = Constellation::qam4();
    const int M = 64, N = 16, trials = 12;   // > 1e4 symbols total
    double acc = 0.0;
    long n = 0;
    for (int t = 0; t < trials; t++) {
        const DDFrame f = map_bits(test::random_bits(100 + t, static_cast<size_t>(M) * N * 2), c, M, N);
        for (const cplx& v : f.data) acc += std::norm(v);
        n += M * N;
    }
    // 4-QAM symbols all have exactly unit energy
    CHECK(acc / n == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("RNG streams: deterministic, purpose- and index-separated") {
    RngStream a(42, "bits", 0), b(42, "bits", 0), c(42, "noise", 0), d(42, "bits", 1);
    bool same_ab = true, same_ac = true, same_ad = true;
    for (int i = 0; i < 64; i++) {
        const auto va = a.next_u64();
        same_ab = same_ab && va == b.next_u64();
        same_ac = same_ac && va == c.next_u64();
        same_ad = same_ad && va == d.next_u64();
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("RNG gaussian moments") {
    RngStream rng(7, "gauss", 0);
    double m1 = 0.0, m2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; i++) {
        const double v = rng.gaussian();
        m1 += v;
        m2 += v * v;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
}
