#include "oddm/ddmatrix.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace oddm {

int DopplerDelayGrid::nonzeros() const {
    int c = 0;
    for (const cplx& v : g)
        if (v != cplx(0.0, 0.0)) c++;
    return c;
}

DopplerDelayGrid paths_to_grid(const PathSet& ch, const SimConfig& cfg) {
    DopplerDelayGrid G;
    G.K = cfg.K;
    G.L = cfg.L;
    G.g.assign(static_cast<size_t>(2 * cfg.K + 1) * cfg.L, 0.0);
    for (const Path& p : ch.paths) {
        if (p.l < 0 || p.l >= cfg.L || std::abs(p.k) > cfg.K)
            throw std::invalid_argument("paths_to_grid: path index out of range");
        G.at(p.k + cfg.K, p.l) += p.gain;   // duplicates merge by addition
    }
    return G;
}

std::vector<BlockComponent> build_Hlm(const DopplerDelayGrid& G, int l, int m, const SimConfig& cfg) {
    std::vector<BlockComponent> comps;
    for (int k = -G.K; k <= G.K; k++) {
        const cplx g = G.at(k + G.K, l);
        if (g == cplx(0.0, 0.0)) continue;
        const double ph = 2.0 * M_PI * k * (m - l) / (static_cast<double>(cfg.M) * cfg.N);
        comps.push_back({k, g * cplx(std::cos(ph), std::sin(ph))});
    }
    return comps;
}

DDChannelMatrix build_H(const PathSet& ch, const SimConfig& cfg) {
    const DopplerDelayGrid G = paths_to_grid(ch, cfg);
    DDChannelMatrix H;
    H.M = cfg.M;
    H.N = cfg.N;
    H.L = cfg.L;
    H.blocks.resize(static_cast<size_t>(cfg.M) * cfg.L);
    H.wrapped.assign(H.blocks.size(), 0);
    for (int m = 0; m < cfg.M; m++) {
        for (int l = 0; l < cfg.L; l++) {
            std::vector<BlockComponent> b = build_Hlm(G, l, m, cfg);
            if (b.empty()) continue;
            H.blocks[static_cast<size_t>(m) * cfg.L + l] = std::move(b);
            if (m - l < 0) H.wrapped[static_cast<size_t>(m) * cfg.L + l] = 1;
        }
    }
    return H;
}

std::vector<cplx> apply_H(const DDChannelMatrix& H, const std::vector<cplx>& x) {
    const int M = H.M, N = H.N;
    if (static_cast<int>(x.size()) != M * N) throw std::invalid_argument("apply_H: size mismatch");
    std::vector<cplx> y(x.size(), 0.0);
    std::vector<cplx> xs(N);
    for (int m = 0; m < M; m++) {
        cplx* ym = &y[static_cast<size_t>(m) * N];
        for (int l = 0; l < H.L; l++) {
            const auto& comps = H.block(m, l);
            if (comps.empty()) continue;
            const int src = H.col_block(m, l);
            const cplx* xm = &x[static_cast<size_t>(src) * N];
            if (H.is_wrapped(m, l)) {
                for (int n = 0; n < N; n++) {
                    const double ph = -2.0 * M_PI * n / N;
                    xs[n] = xm[n] * cplx(std::cos(ph), std::sin(ph));   // D
                }
                xm = xs.data();
            }
            for (const BlockComponent& c : comps) {
                const int k = ((c.k % N) + N) % N;
                for (int n = 0; n < N; n++) ym[n] += c.coeff * xm[(n - k + N) % N];
            }
        }
    }
    return y;
}

std::vector<cplx> apply_H_adjoint(const DDChannelMatrix& H, const std::vector<cplx>& x) {
    const int M = H.M, N = H.N;
    if (static_cast<int>(x.size()) != M * N) throw std::invalid_argument("apply_H_adjoint: size mismatch");
    std::vector<cplx> y(x.size(), 0.0);
    std::vector<cplx> acc(N);
    for (int m = 0; m < M; m++) {
        const cplx* xm = &x[static_cast<size_t>(m) * N];
        for (int l = 0; l < H.L; l++) {
            const auto& comps = H.block(m, l);
            if (comps.empty()) continue;
            const int src = H.col_block(m, l);
            cplx* ys = &y[static_cast<size_t>(src) * N];
            std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
            // (C^k)^H x has components x[(n+k) mod N]
            for (const BlockComponent& c : comps) {
                const int k = ((c.k % N) + N) % N;
                const cplx cc = std::conj(c.coeff);
                for (int n = 0; n < N; n++) acc[n] += cc * xm[(n + k) % N];
            }
            if (H.is_wrapped(m, l)) {
                for (int n = 0; n < N; n++) {
                    const double ph = 2.0 * M_PI * n / N;   // D^H
                    ys[n] += acc[n] * cplx(std::cos(ph), std::sin(ph));
                }
            } else {
                for (int n = 0; n < N; n++) ys[n] += acc[n];
            }
        }
    }
    return y;
}

std::vector<cplx> dense_H(const DDChannelMatrix& H) {
    const int MN = H.M * H.N;
    if (MN > 256) throw std::invalid_argument("dense_H: guarded to MN <= 256");
    std::vector<cplx> D(static_cast<size_t>(MN) * MN, 0.0);
    const int N = H.N;
    for (int m = 0; m < H.M; m++) {
        for (int l = 0; l < H.L; l++) {
            const auto& comps = H.block(m, l);
            if (comps.empty()) continue;
            const int src = H.col_block(m, l);
            for (const BlockComponent& c : comps) {
                const int k = ((c.k % N) + N) % N;
                for (int n = 0; n < N; n++) {
                    const int row = m * N + n;
                    const int coln = (n - k + N) % N;
                    const int col = src * N + coln;
                    cplx v = c.coeff;
                    if (H.is_wrapped(m, l)) {
                        const double ph = -2.0 * M_PI * coln / N;
                        v *= cplx(std::cos(ph), std::sin(ph));
                    }
                    D[static_cast<size_t>(row) * MN + col] += v;
                }
            }
        }
    }
    return D;
}

OtfsDDMatrix build_otfs_H(const PathSet& ch, const SimConfig& cfg) {
    const int M = cfg.M, N = cfg.N;
    OtfsDDMatrix H;
    H.M = M;
    H.N = N;
    H.rows.resize(static_cast<size_t>(M) * N);
    for (const Path& p : ch.paths) {
        for (int m = 0; m < M; m++) {
            const int sm = ((m - p.l) % M + M) % M;
            const double ph = 2.0 * M_PI * p.k * (m - p.l) / (static_cast<double>(M) * N);
            const cplx base = p.gain * cplx(std::cos(ph), std::sin(ph));
            for (int n = 0; n < N; n++) {
                const int sn = ((n - p.k) % N + N) % N;
                cplx v = base;
                if (m < p.l) {   // alpha_p lower branch; upper branch for m >= l_p
                    const double a = -2.0 * M_PI * sn / N;
                    v *= (static_cast<double>(N - 1) / N) * cplx(std::cos(a), std::sin(a));
                }
                H.rows[static_cast<size_t>(m) * N + n].push_back({sm * N + sn, v});
            }
        }
    }
    return H;
}

std::vector<cplx> apply_otfs_H(const OtfsDDMatrix& H, const std::vector<cplx>& x) {
    if (x.size() != H.rows.size()) throw std::invalid_argument("apply_otfs_H: size mismatch");
    std::vector<cplx> y(x.size(), 0.0);
    for (size_t r = 0; r < H.rows.size(); r++) {
        cplx acc = 0.0;
        for (const SparseEntry& e : H.rows[r]) acc += e.v * x[e.col];
        y[r] = acc;
    }
    return y;
}

void write_H_coo_csv(const DDChannelMatrix& H, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "row,col,re,im\n";
    const int N = H.N;
    char buf[128];
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
                    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", m * N + n, src * N + coln,
                                  v.real(), v.imag());
                    f << buf;
                }
            }
        }
    }
}

}  // namespace oddm
