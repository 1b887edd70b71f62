#pragma once

#include "oddm/core.hpp"

namespace oddm {

/**
 * Real pulse sampled at rate O*M/T.  taps[i] is the value at
 * t0 + i/rate; energy is the discrete trapezoidal integral of |.|^2
 * (endpoint taps are zero by construction, so it reduces to sum*dt).
 */
struct SampledPulse {
    std::vector<double> taps;
    double rate = 0.0;
    double t0 = 0.0;

    size_t size() const { return taps.size(); }
    double energy() const;
};

// Square-root raised cosine, 1/sqrt(Tsym) scaling, with analytic limits at
// t = 0 and |t| = Tsym/(4*rolloff).  Total function.
double srrc(double t, double rolloff, double Tsym);

// a(t): srrc with Tsym = T/M, hard-truncated to the open interval
// (-Q*T/M, Q*T/M) (boundary taps zero), rescaled so energy() == 1/N.
SampledPulse build_a(const SimConfig& cfg);

// u(t) = sum_{n=0..N-1} a(t - nT); energy 1.  u_cp adds the n = -1 copy.
SampledPulse build_u(const SimConfig& cfg);
SampledPulse build_u_cp(const SimConfig& cfg);

/**
 * Cross-ambiguity A(tau,nu) = integral g1(t) g2(t-tau) e^{-j2pi nu (t-tau)} dt,
 * trapezoidal on the common sample grid.  tau must be an integer number of
 * grid steps (throws std::invalid_argument otherwise).
 */
cplx ambiguity(const SampledPulse& g1, const SampledPulse& g2, double tau, double nu);

struct AmbiguityReport {
    int M = 0, N = 0;
    // |A| over the grid, row-major in (m + M-1, n + N-1); m,n in [-(M-1), M-1] x [-(N-1), N-1]
    std::vector<double> abs_grid;
    std::vector<cplx> grid;
    double origin = 0.0;          // A(0,0) (real part; imaginary is ~0)
    double max_off_origin = 0.0;
    int argmax_m = 0, argmax_n = 0;
    double max_n0_row = 0.0;      // max over m != 0 at n = 0
    double tol = 0.0;
    int violations = 0;           // count of off-origin |A| > tol

    double abs_at(int m, int n) const {
        return abs_grid[static_cast<size_t>(m + M - 1) * (2 * N - 1) + (n + N - 1)];
    }
};

// Full grid scan of A_{u,u}(m*T/M, n/(NT)) for |m| <= M-1, |n| <= N-1.
AmbiguityReport verify_orthogonality(const SimConfig& cfg, double tol);

// CSV emission (columns m, n, abs_A, re_A, im_A).
void write_ambiguity_csv(const AmbiguityReport& rep, const std::string& path);

}  // namespace oddm
