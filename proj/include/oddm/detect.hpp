#pragma once

#include "oddm/core.hpp"
#include "oddm/ddmatrix.hpp"

namespace oddm {

/**
 * Sparse factor graph of y = Hx + z.  Edges are stored once per observation
 * node; variable nodes index back into the edge array.
 */
struct FactorGraph {
    int n_nodes = 0;   // MN on each side
    struct Edge {
        int var;
        int obs;
        cplx h;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> obs_edges;   // per observation node: edge ids
    std::vector<std::vector<int>> var_edges;   // per variable node: edge ids

    int obs_degree(int d) const { return static_cast<int>(obs_edges[d].size()); }
    int var_degree(int c) const { return static_cast<int>(var_edges[c].size()); }
};

FactorGraph build_graph(const DDChannelMatrix& H);
FactorGraph build_graph(const OtfsDDMatrix& H);

struct DetectorSettings {
    int max_iters = 30;
    double damping = 0.5;
    double convergence_tol = 1e-4;
    double noise_var = 1e-2;

    void validate() const;
};

struct MpResult {
    std::vector<int> hard;           // constellation point indices
    std::vector<double> posterior;   // row-major [var][symbol]
    bool converged = false;
    int iterations = 0;
};

/**
 * Gaussian-approximation message passing (flooding schedule, damped
 * probability updates).  Convergence: max posterior change < tol, or every
 * posterior saturated to 1-tol.  Non-convergence returns current beliefs
 * with converged=false.
 */
MpResult mp_detect(const std::vector<cplx>& y, const FactorGraph& g, const DetectorSettings& s,
                   const Constellation& c);

// Regularized linear solve (H^H H + noise_var I) x = H^H y by conjugate
// gradient on the structured operator, then slicing.  Throws on CG failure
// with a residual report.
std::vector<int> mmse_detect(const std::vector<cplx>& y, const DDChannelMatrix& H, double noise_var,
                             const Constellation& c);
// Soft output (the solve itself), for oracle tests.
std::vector<cplx> mmse_equalize(const std::vector<cplx>& y, const DDChannelMatrix& H, double noise_var);

// Exhaustive minimum-distance search, lexicographic tie-break; guarded to
// MN * bits_per_symbol <= 24.
std::vector<int> ml_detect(const std::vector<cplx>& y, const DDChannelMatrix& H, const Constellation& c);

}  // namespace oddm
