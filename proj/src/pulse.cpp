#include "oddm/pulse.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace oddm {

double SampledPulse::energy() const {
    double e = 0.0;
    for (double v : taps) e += v * v;
    return e / rate;
}

double srrc(double t, double rolloff, double Tsym) {
    const double u = t / Tsym;
    const double b = rolloff;
    const double scale = 1.0 / std::sqrt(Tsym);
    if (std::abs(u) < 1e-10) return scale * (1.0 - b + 4.0 * b / M_PI);
    if (b > 0.0) {
        const double us = 1.0 / (4.0 * b);
        if (std::abs(std::abs(u) - us) < 1e-10) {
            const double x = M_PI / (4.0 * b);
            return scale * (b / std::sqrt(2.0)) *
                   ((1.0 + 2.0 / M_PI) * std::sin(x) + (1.0 - 2.0 / M_PI) * std::cos(x));
        }
    }
    const double num = std::sin(M_PI * (1.0 - b) * u) + 4.0 * b * u * std::cos(M_PI * (1.0 + b) * u);
    const double den = M_PI * u * (1.0 - 16.0 * b * b * u * u);
    return scale * num / den;
}

SampledPulse build_a(const SimConfig& cfg) {
    const int O = cfg.oversampling;
    const double Ts = cfg.sample_interval();
    const double dt = Ts / O;
    const int half = cfg.Q * O;

    SampledPulse p;
    p.rate = 1.0 / dt;
    p.t0 = -cfg.Q * Ts;
    p.taps.assign(2 * half + 1, 0.0);
    for (int i = 1; i < 2 * half; i++)   // boundary taps stay zero: open support
        p.taps[i] = srrc((i - half) * dt, cfg.rolloff, Ts);

    const double e = p.energy();
    const double g = std::sqrt((1.0 / cfg.N) / e);
    for (double& v : p.taps) v *= g;
    return p;
}

namespace {

SampledPulse build_train(const SimConfig& cfg, int n_first, int n_last) {
    SampledPulse a = build_a(cfg);
    const int O = cfg.oversampling;
    const int burst = static_cast<int>(a.size());   // 2QO+1
    const int period = cfg.M * O;                   // T in grid steps

    SampledPulse u;
    u.rate = a.rate;
    u.t0 = n_first * cfg.T() - cfg.Q * cfg.sample_interval();
    u.taps.assign(static_cast<size_t>(n_last - n_first) * period + burst, 0.0);
    for (int n = n_first; n <= n_last; n++) {
        const size_t off = static_cast<size_t>(n - n_first) * period;
        for (int i = 0; i < burst; i++) u.taps[off + i] += a.taps[i];
    }
    return u;
}

}  // namespace

SampledPulse build_u(const SimConfig& cfg) { return build_train(cfg, 0, cfg.N - 1); }
SampledPulse build_u_cp(const SimConfig& cfg) { return build_train(cfg, -1, cfg.N - 1); }

cplx ambiguity(const SampledPulse& g1, const SampledPulse& g2, double tau, double nu) {
    if (g1.rate != g2.rate) throw std::invalid_argument("ambiguity: pulses sampled at different rates");
    const double dt = 1.0 / g1.rate;
    const double shift = tau / dt;
    const long s = std::lround(shift);
    if (std::abs(shift - static_cast<double>(s)) > 1e-6)
        throw std::invalid_argument("ambiguity: tau is not on the sample grid");

    // g2 shifted by tau occupies times g2.t0 + tau + j*dt
    // overlap in absolute grid index q (time q*dt):
    const long q1a = std::lround(g1.t0 / dt);
    const long q2a = std::lround(g2.t0 / dt) + s;
    const long lo = std::max(q1a, q2a);
    const long hi = std::min(q1a + static_cast<long>(g1.size()) - 1,
                             q2a + static_cast<long>(g2.size()) - 1);
    cplx acc = 0.0;
    for (long q = lo; q <= hi; q++) {
        const double v = g1.taps[q - q1a] * g2.taps[q - q2a];
        if (v == 0.0) continue;
        const double ph = -2.0 * M_PI * nu * (q * dt - tau);
        acc += v * cplx(std::cos(ph), std::sin(ph));
    }
    return acc * dt;
}

AmbiguityReport verify_orthogonality(const SimConfig& cfg, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("verify_orthogonality: tol must be positive");
    const SampledPulse u = build_u(cfg);
    const int M = cfg.M, N = cfg.N;
    const double Ts = cfg.sample_interval();
    const double dnu = cfg.doppler_resolution();

    AmbiguityReport rep;
    rep.M = M;
    rep.N = N;
    rep.tol = tol;
    rep.abs_grid.assign(static_cast<size_t>(2 * M - 1) * (2 * N - 1), 0.0);
    rep.grid.assign(rep.abs_grid.size(), 0.0);

    for (int m = -(M - 1); m <= M - 1; m++) {
        for (int n = -(N - 1); n <= N - 1; n++) {
            const cplx A = ambiguity(u, u, m * Ts, n * dnu);
            const size_t idx = static_cast<size_t>(m + M - 1) * (2 * N - 1) + (n + N - 1);
            rep.grid[idx] = A;
            const double a = std::abs(A);
            rep.abs_grid[idx] = a;
            if (m == 0 && n == 0) {
                rep.origin = A.real();
            } else {
                if (a > rep.max_off_origin) {
                    rep.max_off_origin = a;
                    rep.argmax_m = m;
                    rep.argmax_n = n;
                }
                if (n == 0 && a > rep.max_n0_row) rep.max_n0_row = a;
                if (a > tol) rep.violations++;
            }
        }
    }
    return rep;
}

void write_ambiguity_csv(const AmbiguityReport& rep, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "m,n,abs_A,re_A,im_A\n";
    char buf[160];
    for (int m = -(rep.M - 1); m <= rep.M - 1; m++) {
        for (int n = -(rep.N - 1); n <= rep.N - 1; n++) {
            const size_t idx = static_cast<size_t>(m + rep.M - 1) * (2 * rep.N - 1) + (n + rep.N - 1);
            const cplx A = rep.grid[idx];
            std::snprintf(buf, sizeof buf, "%d,%d,%.9e,%.9e,%.9e\n", m, n, rep.abs_grid[idx],
                          A.real(), A.imag());
            f << buf;
        }
    }
}

}  // namespace oddm
