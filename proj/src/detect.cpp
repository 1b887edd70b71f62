#include "oddm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oddm {

namespace {

void finalize_graph(FactorGraph& g) {
    g.obs_edges.assign(g.n_nodes, {});
    g.var_edges.assign(g.n_nodes, {});
    for (int e = 0; e < static_cast<int>(g.edges.size()); e++) {
        g.obs_edges[g.edges[e].obs].push_back(e);
        g.var_edges[g.edges[e].var].push_back(e);
    }
}

}  // namespace

FactorGraph build_graph(const DDChannelMatrix& H) {
    const int N = H.N;
    FactorGraph g;
    g.n_nodes = H.M * N;
    for (int m = 0; m < H.M; m++) {
        for (int l = 0; l < H.L; l++) {
            const auto& comps = H.block(m, l);
            if (comps.empty()) continue;
            const int src = H.col_block(m, l);
            for (const BlockComponent& c : comps) {
                const int k = ((c.k % N) + N) % N;
                for (int n = 0; n < N; n++) {
                    const int coln = (n - k + N) % N;
                    cplx v = c.coeff;
                    if (H.is_wrapped(m, l)) {
                        const double ph = -2.0 * M_PI * coln / N;
                        v *= cplx(std::cos(ph), std::sin(ph));
                    }
                    g.edges.push_back({src * N + coln, m * N + n, v});
                }
            }
        }
    }
    finalize_graph(g);
    return g;
}

FactorGraph build_graph(const OtfsDDMatrix& H) {
    FactorGraph g;
    g.n_nodes = H.M * H.N;
    for (int r = 0; r < g.n_nodes; r++)
        for (const SparseEntry& e : H.rows[r]) g.edges.push_back({e.col, r, e.v});
    finalize_graph(g);
    return g;
}

void DetectorSettings::validate() const {
    if (max_iters <= 0 || damping <= 0.0 || damping > 1.0 || convergence_tol <= 0.0 || noise_var <= 0.0)
        throw std::invalid_argument("DetectorSettings: all fields must be positive (damping in (0,1])");
}

MpResult mp_detect(const std::vector<cplx>& y, const FactorGraph& g, const DetectorSettings& s,
                   const Constellation& c) {
    s.validate();
    const int n = g.n_nodes;
    if (static_cast<int>(y.size()) != n) throw std::invalid_argument("mp_detect: y length mismatch");
    const int A = c.size();
    const int ne = static_cast<int>(g.edges.size());

    // var -> obs messages, per edge, uniform init
    std::vector<double> pmsg(static_cast<size_t>(ne) * A, 1.0 / A);
    // per-edge symbol mean / variance of the connected variable
    std::vector<cplx> emean(ne);
    std::vector<double> evar(ne);
    // obs -> var interference mean / variance per edge
    std::vector<cplx> imean(ne);
    std::vector<double> ivar(ne);

    MpResult res;
    res.posterior.assign(static_cast<size_t>(n) * A, 1.0 / A);
    std::vector<double> prev_post = res.posterior;
    std::vector<double> logL(static_cast<size_t>(ne) * A);

    double e2max = 0.0;
    for (int a = 0; a < A; a++) e2max = std::max(e2max, std::norm(c.points[a]));

    for (int it = 1; it <= s.max_iters; it++) {
        // observation update: Gaussian interference approximation (extrinsic)
        for (int e = 0; e < ne; e++) {
            cplx mu = 0.0;
            double v2 = 0.0, e2 = 0.0;
            const double* p = &pmsg[static_cast<size_t>(e) * A];
            for (int a = 0; a < A; a++) {
                mu += p[a] * c.points[a];
                e2 += p[a] * std::norm(c.points[a]);
            }
            v2 = e2 - std::norm(mu);
            emean[e] = mu;
            evar[e] = std::max(v2, 0.0);
        }
        for (int d = 0; d < n; d++) {
            cplx tot_mu = 0.0;
            double tot_var = s.noise_var;
            for (int e : g.obs_edges[d]) {
                tot_mu += g.edges[e].h * emean[e];
                tot_var += std::norm(g.edges[e].h) * evar[e];
            }
            for (int e : g.obs_edges[d]) {
                imean[e] = tot_mu - g.edges[e].h * emean[e];
                ivar[e] = std::max(tot_var - std::norm(g.edges[e].h) * evar[e], s.noise_var * 1e-12);
            }
        }
        // per-edge symbol log-likelihoods
        for (int e = 0; e < ne; e++) {
            const cplx r = y[g.edges[e].obs] - imean[e];
            double* L = &logL[static_cast<size_t>(e) * A];
            for (int a = 0; a < A; a++) L[a] = -std::norm(r - g.edges[e].h * c.points[a]) / ivar[e];
        }
        // variable update: posteriors and damped extrinsic messages
        double delta = 0.0;
        double min_sat = 1.0;
        for (int v = 0; v < n; v++) {
            double tot[16] = {0};
            for (int e : g.var_edges[v]) {
                const double* L = &logL[static_cast<size_t>(e) * A];
                for (int a = 0; a < A; a++) tot[a] += L[a];
            }
            // posterior = softmax(tot)
            double mx = tot[0];
            for (int a = 1; a < A; a++) mx = std::max(mx, tot[a]);
            double sum = 0.0, pb[16];
            for (int a = 0; a < A; a++) { pb[a] = std::exp(tot[a] - mx); sum += pb[a]; }
            double pmax = 0.0;
            for (int a = 0; a < A; a++) {
                pb[a] /= sum;
                const size_t idx = static_cast<size_t>(v) * A + a;
                delta = std::max(delta, std::abs(pb[a] - prev_post[idx]));
                res.posterior[idx] = pb[a];
                pmax = std::max(pmax, pb[a]);
            }
            min_sat = std::min(min_sat, pmax);
            for (int e : g.var_edges[v]) {
                const double* L = &logL[static_cast<size_t>(e) * A];
                double ex[16], emx = -1e300, esum = 0.0;
                for (int a = 0; a < A; a++) { ex[a] = tot[a] - L[a]; emx = std::max(emx, ex[a]); }
                for (int a = 0; a < A; a++) { ex[a] = std::exp(ex[a] - emx); esum += ex[a]; }
                double* p = &pmsg[static_cast<size_t>(e) * A];
                for (int a = 0; a < A; a++)
                    p[a] = s.damping * (ex[a] / esum) + (1.0 - s.damping) * p[a];
            }
        }
        prev_post = res.posterior;
        res.iterations = it;
        if (delta < s.convergence_tol || min_sat >= 1.0 - s.convergence_tol) {
            res.converged = true;
            break;
        }
    }

    res.hard.resize(n);
    for (int v = 0; v < n; v++) {
        const double* p = &res.posterior[static_cast<size_t>(v) * A];
        int best = 0;
        for (int a = 1; a < A; a++)
            if (p[a] > p[best]) best = a;
        res.hard[v] = best;
    }
    return res;
}

std::vector<cplx> mmse_equalize(const std::vector<cplx>& y, const DDChannelMatrix& H, double noise_var) {
    if (noise_var < 0.0) throw std::invalid_argument("mmse: negative noise variance");
    const size_t n = y.size();
    auto op = [&](const std::vector<cplx>& v) {
        std::vector<cplx> r = apply_H_adjoint(H, apply_H(H, v));
        for (size_t i = 0; i < n; i++) r[i] += noise_var * v[i];
        return r;
    };
    const std::vector<cplx> b = apply_H_adjoint(H, y);
    double bnorm = 0.0;
    for (const cplx& v : b) bnorm += std::norm(v);
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) return std::vector<cplx>(n, 0.0);

    std::vector<cplx> x(n, 0.0), r = b, p = b;
    double rs = bnorm * bnorm;
    const int max_it = static_cast<int>(5 * n) + 50;
    for (int it = 0; it < max_it; it++) {
        if (std::sqrt(rs) / bnorm < 1e-12) return x;
        const std::vector<cplx> Ap = op(p);
        cplx pap = 0.0;
        for (size_t i = 0; i < n; i++) pap += std::conj(p[i]) * Ap[i];
        const double alpha = rs / pap.real();
        double rs_new = 0.0;
        for (size_t i = 0; i < n; i++) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rs_new += std::norm(r[i]);
        }
        const double beta = rs_new / rs;
        rs = rs_new;
        for (size_t i = 0; i < n; i++) p[i] = r[i] + beta * p[i];
    }
    throw std::runtime_error("mmse_equalize: CG did not converge; relative residual " +
                             std::to_string(std::sqrt(rs) / bnorm));
}

std::vector<int> mmse_detect(const std::vector<cplx>& y, const DDChannelMatrix& H, double noise_var,
                             const Constellation& c) {
    const std::vector<cplx> x = mmse_equalize(y, H, noise_var);
    std::vector<int> hard(x.size());
    for (size_t i = 0; i < x.size(); i++) hard[i] = c.slice(x[i]);
    return hard;
}

std::vector<int> ml_detect(const std::vector<cplx>& y, const DDChannelMatrix& H, const Constellation& c) {
    const int n = H.M * H.N;
    if (static_cast<long>(n) * c.bits_per_symbol > 24)
        throw std::invalid_argument("ml_detect: instance too large (MN*bits > 24)");
    if (static_cast<int>(y.size()) != n) throw std::invalid_argument("ml_detect: y length mismatch");
    const int A = c.size();

    // sparse columns from the dense expansion (toy sizes only)
    const std::vector<cplx> D = dense_H(H);
    std::vector<std::vector<SparseEntry>> cols(n);
    for (int r = 0; r < n; r++)
        for (int col = 0; col < n; col++) {
            const cplx v = D[static_cast<size_t>(r) * n + col];
            if (v != cplx(0.0, 0.0)) cols[col].push_back({r, v});
        }

    std::vector<cplx> resid(y);   // y - Hx with x = all points[0]
    for (int col = 0; col < n; col++)
        for (const SparseEntry& e : cols[col]) resid[e.col] -= e.v * c.points[0];
    double cost = 0.0;
    for (const cplx& v : resid) cost += std::norm(v);

    std::vector<int> cur(n, 0), best(n, 0);
    double best_cost = cost;

    auto set_sym = [&](int pos, int to, double& cost_io) {
        const cplx d = c.points[cur[pos]] - c.points[to];
        for (const SparseEntry& e : cols[pos]) {
            const cplx old = resid[e.col];
            const cplx nw = old + e.v * d;
            cost_io += std::norm(nw) - std::norm(old);
            resid[e.col] = nw;
        }
        cur[pos] = to;
    };

    // depth-first enumeration in lexicographic order; first minimum wins ties
    auto recurse = [&](auto&& self, int pos, double cost_in) -> void {
        if (pos == n) {
            if (cost_in < best_cost - 1e-15) {
                best_cost = cost_in;
                best = cur;
            }
            return;
        }
        for (int a = 0; a < A; a++) {
            double cc = cost_in;
            set_sym(pos, a, cc);
            self(self, pos + 1, cc);
        }
        double dummy = 0.0;
        set_sym(pos, 0, dummy);
    };
    recurse(recurse, 0, cost);
    return best;
}

}  // namespace oddm
