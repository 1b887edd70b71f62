#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oddm/channel.hpp"
#include "oddm/core.hpp"

namespace oddm::test {

inline std::vector<std::uint8_t> random_bits(std::uint64_t seed, size_t n, const char* tag = "test.bits") {
    RngStream rng(seed, tag, 0);
    std::vector<std::uint8_t> b(n);
    for (size_t i = 0; i < n; i++) b[i] = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return b;
}

inline DDFrame random_frame(const SimConfig& cfg, std::uint64_t seed) {
    const Constellation qam = Constellation::qam4();
    return map_bits(random_bits(seed, static_cast<size_t>(cfg.M) * cfg.N * 2), qam, cfg.M, cfg.N);
}

inline double rel_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rel_err: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); i++) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); i++) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Dense n x n complex solve by LU with partial pivoting (oracle only).
inline std::vector<cplx> dense_solve(std::vector<cplx> A, std::vector<cplx> b) {
    const size_t n = b.size();
    if (A.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
    std::vector<size_t> piv(n);
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        for (size_t r = c + 1; r < n; r++)
            if (std::abs(A[r * n + c]) > std::abs(A[p * n + c])) p = r;
        piv[c] = p;
        if (p != c) {
            for (size_t j = 0; j < n; j++) std::swap(A[c * n + j], A[p * n + j]);
            std::swap(b[c], b[p]);
        }
        const cplx d = A[c * n + c];
        if (std::abs(d) == 0.0) throw std::runtime_error("dense_solve: singular");
        for (size_t r = c + 1; r < n; r++) {
            const cplx f = A[r * n + c] / d;
            if (f == cplx(0.0, 0.0)) continue;
            A[r * n + c] = 0.0;
            for (size_t j = c + 1; j < n; j++) A[r * n + j] -= f * A[c * n + j];
            b[r] -= f * b[c];
        }
    }
    std::vector<cplx> x(n);
    for (size_t ri = n; ri-- > 0;) {
        cplx acc = b[ri];
        for (size_t j = ri + 1; j < n; j++) acc -= A[ri * n + j] * x[j];
        x[ri] = acc / A[ri * n + ri];
    }
    return x;
}

inline std::vector<cplx> dense_matvec(const std::vector<cplx>& A, const std::vector<cplx>& x) {
    const size_t n = x.size();
    std::vector<cplx> y(n, 0.0);
    for (size_t r = 0; r < n; r++)
        for (size_t c = 0; c < n; c++) y[r] += A[r * n + c] * x[c];
    return y;
}

inline PathSet make_paths(std::initializer_list<Path> ps) {
    PathSet ch;
    ch.paths = ps;
    return ch;
}

// Random on-grid channel with l=0 included, unit power (test-local copy so the
// production generator is not its own oracle).
inline PathSet random_channel(const SimConfig& cfg, int P, std::uint64_t seed) {
    RngStream rng(seed, "test.chan", 0);
    PathSet ch;
    std::vector<std::pair<int, int>> pairs{{0, static_cast<int>(rng.uniform_int(2 * cfg.K + 1)) - cfg.K}};
    while (static_cast<int>(pairs.size()) < P) {
        int l = static_cast<int>(rng.uniform_int(cfg.L));
        int k = static_cast<int>(rng.uniform_int(2 * cfg.K + 1)) - cfg.K;
        bool dup = false;
        for (auto& q : pairs) dup = dup || (q.first == l && q.second == k);
        if (!dup) pairs.emplace_back(l, k);
    }
    for (auto& [l, k] : pairs) ch.paths.push_back({rng.cgaussian(), l, k});
    const double g = std::sqrt(ch.gain_power());
    for (Path& p : ch.paths) p.gain /= g;
    return ch;
}

}  // namespace oddm::test
