#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "oddm/pulse.hpp"

using namespace oddm;

namespace {

SimConfig cfg_with(int M, int N, int Q, int O, double beta = 0.1, int L = 9, int K = 3) {
    SimConfig c;
    c.M = M;
    c.N = N;
    c.Q = Q;
    c.oversampling = O;
    c.rolloff = beta;
    c.L = L;
    c.K = K;
    c.validate();
    return c;
}

// Discrete Nyquist ISI oracle: (a * a)(q Ts) via direct correlation on the
// oversampled grid, relative to lag 0.
double isi_metric(const SampledPulse& a, int O, int max_lag) {
    double c0 = 0.0;
    for (double v : a.taps) c0 += v * v;
    double worst = 0.0;
    for (int q = 1; q <= max_lag; q++) {
        double c = 0.0;
        for (size_t i = 0; i + static_cast<size_t>(q) * O < a.taps.size(); i++)
            c += a.taps[i] * a.taps[i + static_cast<size_t>(q) * O];
        worst = std::max(worst, std::abs(c) / c0);
    }
    return worst;
}

}  // namespace

TEST_CASE("srrc analytic limit at t = 0 and even symmetry") {
    const double Ts = 1.0 / (15e3 * 512);
    const double b = 0.1;
    CHECK(srrc(0.0, b, Ts) == doctest::Approx((1.0 - b + 4.0 * b / M_PI) / std::sqrt(Ts)));
    RngStream rng(3, "srrc", 0);
    for (int i = 0; i < 50; i++) {
        const double t = (rng.uniform() - 0.5) * 40.0 * Ts;
        CHECK(srrc(t, b, Ts) == doctest::Approx(srrc(-t, b, Ts)).epsilon(1e-12));
    }
    // removable singularity |t| = Ts/(4b) is finite and continuous
    const double ts = Ts / (4.0 * b);
    const double v = srrc(ts, b, Ts);
    CHECK(std::isfinite(v));
    CHECK(srrc(ts * (1 + 1e-7), b, Ts) == doctest::Approx(v).epsilon(1e-4));
}

TEST_CASE("srrc matches an independent frequency-domain construction") {
    // sqrt of the raised-cosine spectrum, inverse transform by direct quadrature
    const double Ts = 1.0, b = 0.1;
    auto oracle = [&](double t) {
        const int n = 20000;
        const double f2 = (1.0 + b) / (2.0 * Ts);
        const double df = 2.0 * f2 / n;
        double acc = 0.0;
        for (int i = 0; i <= n; i++) {
            const double f = -f2 + i * df;
            const double af = std::abs(f);
            const double f1 = (1.0 - b) / (2.0 * Ts);
            double R;
            if (af <= f1) R = Ts;
            else R = Ts / 2.0 * (1.0 + std::cos(M_PI * Ts / b * (af - f1)));
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * std::sqrt(R) * std::cos(2.0 * M_PI * f * t) * df;
        }
        return acc;
    };
    for (double t : {0.0, 1.0, 2.5, 8.0, 20.0})
        CHECK(srrc(t, b, Ts) == doctest::Approx(oracle(t)).epsilon(1e-5));
}

TEST_CASE("srrc self-convolution is Nyquist to 1e-3 after Q=20 truncation") {
    const SimConfig cfg = cfg_with(512, 16, 20, 16);
    const SampledPulse a = build_a(cfg);
    CHECK(isi_metric(a, cfg.oversampling, 5) <= 1e-3);
}

TEST_CASE("build_a: energy, support, symmetry") {
    const SimConfig cfg = cfg_with(64, 16, 20, 16);
    const SampledPulse a = build_a(cfg);
    CHECK(std::abs(a.energy() - 1.0 / cfg.N) <= 1e-9);
    CHECK(a.taps.front() == 0.0);   // open support at +-Q T/M
    CHECK(a.taps.back() == 0.0);
    for (size_t i = 0; i < a.taps.size(); i++)
        CHECK(a.taps[i] == doctest::Approx(a.taps[a.taps.size() - 1 - i]).epsilon(1e-12));
    CHECK(a.t0 == doctest::Approx(-cfg.Q * cfg.sample_interval()));
    // full-profile ISI metric at the paper's Q
    CHECK(isi_metric(a, cfg.oversampling, 2 * cfg.Q) <= 1e-3);
}

TEST_CASE("build_u and build_u_cp: energy and burst structure") {
    const SimConfig cfg = cfg_with(64, 16, 8, 8);
    const SampledPulse u = build_u(cfg);
    CHECK(std::abs(u.energy() - 1.0) <= 1e-6);

    // N disjoint bursts of width 2Q T/M: zero between bursts
    const int O = cfg.oversampling, per = cfg.M * O, burst = 2 * cfg.Q * O;
    for (int nd = 0; nd + 1 < cfg.N; nd++) {
        for (int i = nd * per + burst + 1; i < (nd + 1) * per - 1; i++) CHECK(u.taps[i] == 0.0);
    }

    // u_cp agrees with u on the shared span and adds one leading burst
    const SampledPulse ucp = build_u_cp(cfg);
    CHECK(ucp.t0 == doctest::Approx(u.t0 - cfg.T()));
    const size_t off = static_cast<size_t>(per);
    for (size_t i = 0; i < u.size(); i++) CHECK(ucp.taps[i + off] == doctest::Approx(u.taps[i]));
}

TEST_CASE("ambiguity: origin normalization, Nyquist lag, off-grid tau") {
    const SimConfig cfg = cfg_with(64, 16, 20, 16);
    const SampledPulse u = build_u(cfg);
    const cplx a00 = ambiguity(u, u, 0.0, 0.0);
    CHECK(std::abs(a00 - cplx(1.0, 0.0)) <= 1e-6);

    const SampledPulse a = build_a(cfg);
    const cplx a10 = ambiguity(a, a, cfg.sample_interval(), 0.0);
    CHECK(std::abs(a10) <= 1e-3 / cfg.N);

    CHECK_THROWS_AS(ambiguity(a, a, 0.3 * cfg.sample_interval() / cfg.oversampling, 0.0),
                    std::invalid_argument);
}

TEST_CASE("verify_orthogonality at the Table-I pulse passes the PR grid") {
    const SimConfig cfg = cfg_with(64, 16, 20, 8);
    const AmbiguityReport rep = verify_orthogonality(cfg, 1e-2);
    CHECK(std::abs(rep.origin - 1.0) <= 1e-6);
    CHECK(rep.max_off_origin <= 1e-2);
    CHECK(rep.max_n0_row <= 1e-3);
    CHECK(rep.violations == 0);
    // symmetry |A(-m,-n)| = |A(m,n)| for real pulses
    CHECK(rep.abs_at(5, 3) == doctest::Approx(rep.abs_at(-5, -3)).epsilon(1e-9));
}

TEST_CASE("truncation residual never increases along Q = 8 -> 16 -> 24") {
    double prev = 1.0;
    for (int Q : {8, 16, 24}) {
        const SimConfig cfg = cfg_with(64, 16, Q, 8);
        const SampledPulse a = build_a(cfg);
        const double m = isi_metric(a, cfg.oversampling, 2 * Q);
        CHECK(m <= prev * (1.0 + 1e-12));
        prev = m;
    }
}

TEST_CASE("near-boundary ambiguity exceeds the interior and shrinks with M") {
    auto region_max = [](const AmbiguityReport& rep, int Q, bool boundary) {
        double mx = 0.0;
        for (int m = -(rep.M - 1); m <= rep.M - 1; m++) {
            const bool near = std::abs(m) > rep.M - 2 * Q;
            if (near != boundary) continue;
            for (int n = -(rep.N - 1); n <= rep.N - 1; n++) {
                if (m == 0 && n == 0) continue;
                mx = std::max(mx, rep.abs_at(m, n));
            }
        }
        return mx;
    };
    const AmbiguityReport r64 = verify_orthogonality(cfg_with(64, 16, 8, 8), 1e-1);
    const AmbiguityReport r128 = verify_orthogonality(cfg_with(128, 16, 8, 8), 1e-1);
    const double b64 = region_max(r64, 8, true), i64 = region_max(r64, 8, false);
    const double b128 = region_max(r128, 8, true), i128 = region_max(r128, 8, false);
    CHECK(b64 > i64);
    CHECK(b128 < b64);
    CHECK(i128 <= i64 * (1.0 + 1e-9));
}

TEST_CASE("burst separation: u(t) u(t - m T/M) vanishes for 2Q <= |m| <= M-2Q") {
    const SimConfig cfg = cfg_with(64, 16, 8, 4);
    const SampledPulse u = build_u(cfg);
    const int O = cfg.oversampling;
    for (int m : {16, 20, 32, 48}) {
        double prod = 0.0;
        const int s = m * O;
        for (size_t i = s; i < u.size(); i++) prod += std::abs(u.taps[i] * u.taps[i - s]);
        CHECK(prod == 0.0);
    }
}

TEST_CASE("ambiguity CSV emission") {
    const SimConfig cfg = cfg_with(16, 4, 4, 4, 0.1, 3, 1);
    const AmbiguityReport rep = verify_orthogonality(cfg, 1e-1);
    const std::string path = "/tmp/oddm_test_amb.csv";
    write_ambiguity_csv(rep, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "m,n,abs_A,re_A,im_A");
    int lines = 0;
    std::string line;
    while (std::getline(f, line)) lines++;
    CHECK(lines == (2 * cfg.M - 1) * (2 * cfg.N - 1));
}
