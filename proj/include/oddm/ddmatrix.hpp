#pragma once

#include "oddm/channel.hpp"
#include "oddm/core.hpp"

namespace oddm {

/** (2K+1) x L grid of path gains; entry (k+K, l) is the gain at Doppler k, delay l. */
struct DopplerDelayGrid {
    int K = 0, L = 0;
    std::vector<cplx> g;   // row-major (2K+1) x L

    cplx& at(int k_off, int l) { return g[static_cast<size_t>(k_off) * L + l]; }
    cplx at(int k_off, int l) const { return g[static_cast<size_t>(k_off) * L + l]; }
    int nonzeros() const;
};

DopplerDelayGrid paths_to_grid(const PathSet& ch, const SimConfig& cfg);

/** One Doppler component of a circulant block: coefficient on C^{k}. */
struct BlockComponent {
    int k;       // Doppler index; C^k shifts x[n] -> x[(n-k) mod N]
    cplx coeff;  // g * e^{j2pi k (m-l)/MN}
};

/**
 * The MN x MN DD channel matrix of Eq. 26-28, stored as M x L circulant
 * blocks H_l^m (by Doppler components) placed at block (m, [m-l]_M), with the
 * CP phase diagonal D = diag{e^{-j2pi nd/N}} post-applied when m-l < 0.
 */
struct DDChannelMatrix {
    int M = 0, N = 0, L = 0;
    // blocks[m*L + l] holds H_l^m; empty when no path at delay l
    std::vector<std::vector<BlockComponent>> blocks;
    std::vector<std::uint8_t> wrapped;   // 1 when m-l < 0 (D applied)

    const std::vector<BlockComponent>& block(int m, int l) const {
        return blocks[static_cast<size_t>(m) * L + l];
    }
    bool is_wrapped(int m, int l) const { return wrapped[static_cast<size_t>(m) * L + l] != 0; }
    int col_block(int m, int l) const { return ((m - l) % M + M) % M; }
};

// H_l^m = sum_k g(k+K,l) e^{j2pi k(m-l)/MN} C^k (Eq. 24); compact component form.
std::vector<BlockComponent> build_Hlm(const DopplerDelayGrid& G, int l, int m, const SimConfig& cfg);

DDChannelMatrix build_H(const PathSet& ch, const SimConfig& cfg);

// y = H x exploiting the circulant structure: O(P*N) per block row.
std::vector<cplx> apply_H(const DDChannelMatrix& H, const std::vector<cplx>& x);

// z = H^H x (adjoint), same cost; used by the MMSE normal-equation solver.
std::vector<cplx> apply_H_adjoint(const DDChannelMatrix& H, const std::vector<cplx>& x);

// Dense expansion for oracle tests (row-major MN x MN); guarded to MN <= 256.
std::vector<cplx> dense_H(const DDChannelMatrix& H);

/** Sparse row-entry form of the approximate OTFS DD relation (Eq. 12-13). */
struct SparseEntry {
    int col;
    cplx v;
};
struct OtfsDDMatrix {
    int M = 0, N = 0;
    std::vector<std::vector<SparseEntry>> rows;   // rows[m*N+n]
};

OtfsDDMatrix build_otfs_H(const PathSet& ch, const SimConfig& cfg);
std::vector<cplx> apply_otfs_H(const OtfsDDMatrix& H, const std::vector<cplx>& x);

// Coordinate-list CSV export (row,col,re,im) of either matrix.
void write_H_coo_csv(const DDChannelMatrix& H, const std::string& path);

}  // namespace oddm
