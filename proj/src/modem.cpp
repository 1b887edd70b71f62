#include "oddm/modem.hpp"

#include <cmath>
#include <stdexcept>

#include "oddm/fft.hpp"

namespace oddm {

std::vector<std::vector<cplx>> oddm_time_samples(const DDFrame& X) {
    std::vector<std::vector<cplx>> rows(X.M);
    for (int m = 0; m < X.M; m++) {
        std::vector<cplx> r(X.N);
        for (int n = 0; n < X.N; n++) r[n] = X.at(m, n);
        rows[m] = dft(r, +1);   // unnormalized IDFT
    }
    return rows;
}

std::vector<cplx> oddm_stagger(const std::vector<std::vector<cplx>>& rows) {
    const int M = static_cast<int>(rows.size());
    const int N = static_cast<int>(rows[0].size());
    std::vector<cplx> s(static_cast<size_t>(M) * N);
    for (int m = 0; m < M; m++) {
        if (static_cast<int>(rows[m].size()) != N) throw std::invalid_argument("stagger: ragged rows");
        for (int nd = 0; nd < N; nd++) s[static_cast<size_t>(nd) * M + m] = rows[m][nd];
    }
    return s;
}

std::vector<std::vector<cplx>> oddm_destagger(const std::vector<cplx>& seq, int M, int N) {
    if (static_cast<int>(seq.size()) != M * N) throw std::invalid_argument("destagger: size mismatch");
    std::vector<std::vector<cplx>> rows(M, std::vector<cplx>(N));
    for (int m = 0; m < M; m++)
        for (int nd = 0; nd < N; nd++) rows[m][nd] = seq[static_cast<size_t>(nd) * M + m];
    return rows;
}

SampledWaveform oddm_modulate(const OddmTxChain& chain, const DDFrame& X) {
    const SimConfig& cfg = chain.cfg;
    if (X.M != cfg.M || X.N != cfg.N) throw std::invalid_argument("oddm_modulate: frame size mismatch");
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling, Q = cfg.Q, L = cfg.L;
    const int MN = M * N;
    const int E = L - 1 + 2 * Q;            // cyclic head extension of the sequence
    const int QO = Q * O;
    const long r0 = -static_cast<long>(L + Q - 1) * O;
    const long r1 = static_cast<long>(MN - 1 + Q) * O;

    const std::vector<cplx> s = oddm_stagger(oddm_time_samples(X));

    SampledWaveform w;
    w.rate = static_cast<double>(O) * M / cfg.T();
    w.t0 = static_cast<double>(r0) / w.rate;
    w.samples.assign(static_cast<size_t>(r1 - r0 + 1), 0.0);

    const std::vector<double>& a = chain.a.taps;
    for (int i = -E; i < MN; i++) {
        const cplx v = s[static_cast<size_t>(((i % MN) + MN) % MN)];
        const long c = static_cast<long>(i) * O;
        const long jlo = std::max<long>(0, r0 - (c - QO));
        const long jhi = std::min<long>(2 * QO, r1 - (c - QO));
        for (long j = jlo; j <= jhi; j++)
            w.samples[c - QO + j - r0] += v * a[j];
    }
    return w;
}

SampledWaveform oddm_modulate(const SimConfig& cfg, const DDFrame& X) {
    return oddm_modulate(OddmTxChain(cfg), X);
}

DDFrame oddm_demodulate(const OddmTxChain& chain, const SampledWaveform& y) {
    const SimConfig& cfg = chain.cfg;
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling, Q = cfg.Q;
    const int MN = M * N;
    const int QO = Q * O;
    if (std::abs(y.rate - chain.a.rate) > 1e-6 * chain.a.rate)
        throw std::invalid_argument("oddm_demodulate: waveform rate does not match the chain tier");
    const long ry = std::lround(y.t0 * y.rate);
    const long last = ry + static_cast<long>(y.size()) - 1;
    // matched filter reads [qO-QO+1, qO+QO-1] for body positions q
    if (ry > -QO + 1 || last < static_cast<long>(MN - 1) * O + QO - 1)
        throw std::invalid_argument("oddm_demodulate: waveform shorter than the frame span");

    const double dt = 1.0 / y.rate;
    const std::vector<double>& a = chain.a.taps;
    std::vector<cplx> branch(MN);
    for (int q = 0; q < MN; q++) {
        const long c = static_cast<long>(q) * O - QO - ry;
        cplx acc = 0.0;
        for (int j = 1; j < 2 * QO; j++) acc += a[j] * y.samples[c + j];
        branch[q] = acc * dt;
    }

    DDFrame Y(M, N);
    std::vector<cplx> col(N);
    for (int m = 0; m < M; m++) {
        for (int nd = 0; nd < N; nd++) col[nd] = branch[static_cast<size_t>(nd) * M + m];
        std::vector<cplx> Ym = dft(col, -1);
        for (int n = 0; n < N; n++) Y.at(m, n) = Ym[n];
    }
    return Y;
}

DDFrame oddm_demodulate(const SimConfig& cfg, const SampledWaveform& y) {
    return oddm_demodulate(OddmTxChain(cfg), y);
}

SampledWaveform otfs_modulate(const OtfsChain& chain, const DDFrame& X) {
    const SimConfig& cfg = chain.cfg;
    if (X.M != cfg.M || X.N != cfg.N) throw std::invalid_argument("otfs_modulate: frame size mismatch");
    const int MN = cfg.M * cfg.N, L = cfg.L;
    const std::vector<cplx> s = oddm_stagger(oddm_time_samples(X));

    SampledWaveform w;
    w.rate = cfg.M / cfg.T();
    w.t0 = -static_cast<double>(L - 1) / w.rate;
    w.samples.resize(static_cast<size_t>(MN + L - 1));
    for (int i = 0; i < L - 1; i++) w.samples[i] = s[MN - (L - 1) + i];
    for (int i = 0; i < MN; i++) w.samples[L - 1 + i] = s[i];
    return w;
}

DDFrame otfs_demodulate(const OtfsChain& chain, const SampledWaveform& y) {
    const SimConfig& cfg = chain.cfg;
    const int M = cfg.M, N = cfg.N, MN = M * N;
    if (std::abs(y.rate - M / cfg.T()) > 1e-6 * y.rate)
        throw std::invalid_argument("otfs_demodulate: expected symbol-rate waveform");
    const long ry = std::lround(y.t0 * y.rate);
    if (ry > 0 || ry + static_cast<long>(y.size()) < MN)
        throw std::invalid_argument("otfs_demodulate: waveform shorter than the frame span");

    DDFrame Y(M, N);
    std::vector<cplx> col(N);
    for (int m = 0; m < M; m++) {
        for (int nd = 0; nd < N; nd++) col[nd] = y.samples[static_cast<size_t>(nd) * M + m - ry];
        std::vector<cplx> Ym = dft(col, -1);
        for (int n = 0; n < N; n++) Y.at(m, n) = Ym[n] / static_cast<double>(N);
    }
    return Y;
}

SampledWaveform otfs_waveform_psd(const OtfsChain& chain, const DDFrame& X) {
    const SimConfig& cfg = chain.cfg;
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling, L = cfg.L;
    const int MN = M * N;
    const std::vector<cplx> s = oddm_stagger(oddm_time_samples(X));

    // truncated-sinc DAC taps at O-grid, sinc(t/Ts) zeros at multiples of Ts
    const int Z = chain.sinc_zeros;
    const int half = Z * O;
    std::vector<double> it(2 * half + 1);
    for (int i = -half; i <= half; i++) {
        if (i == 0) { it[half] = 1.0; continue; }
        const double x = M_PI * i / O;
        it[i + half] = std::sin(x) / x;
    }

    SampledWaveform w;
    w.rate = static_cast<double>(O) * M / cfg.T();
    w.t0 = -static_cast<double>(L - 1) * cfg.sample_interval();
    w.samples.assign(static_cast<size_t>(MN + L - 1) * O, 0.0);

    // blocks: the CP segment, then N rect_T slots; DAC per block, windowed to it
    struct Blk { int seq_lo, seq_hi, out_lo; };   // sequence indices, inclusive
    std::vector<Blk> blocks;
    if (L > 1) blocks.push_back({MN - (L - 1), MN - 1, 0});
    for (int ns = 0; ns < N; ns++) blocks.push_back({ns * M, ns * M + M - 1, (L - 1 + ns * M) * O});

    for (const Blk& b : blocks) {
        const int nsamp = b.seq_hi - b.seq_lo + 1;
        const int span = nsamp * O;   // rect window extent on the O-grid
        for (int i = 0; i < nsamp; i++) {
            const cplx v = s[static_cast<size_t>(b.seq_lo + i)];
            const int c = i * O;   // sample position within block
            const int jlo = std::max(-half, -c);
            const int jhi = std::min(half, span - 1 - c);
            for (int j = jlo; j <= jhi; j++)
                w.samples[static_cast<size_t>(b.out_lo + c + j)] += v * it[j + half];
        }
    }
    return w;
}

SampledWaveform otfs_modulate_wave(const OtfsChain& chain, const DDFrame& X) {
    const SimConfig& cfg = chain.cfg;
    if (X.M != cfg.M || X.N != cfg.N) throw std::invalid_argument("otfs_modulate_wave: frame size mismatch");
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling, L = cfg.L;
    const int MO = M * O;
    const std::vector<cplx> s = oddm_stagger(oddm_time_samples(X));

    SampledWaveform w;
    w.rate = static_cast<double>(O) * M / cfg.T();
    w.t0 = -static_cast<double>(L - 1) * cfg.sample_interval();
    w.samples.resize(static_cast<size_t>(M * N + L - 1) * O);

    std::vector<cplx> slot(M), big(MO);
    for (int ns = 0; ns < N; ns++) {
        for (int m = 0; m < M; m++) slot[m] = s[static_cast<size_t>(ns) * M + m];
        const std::vector<cplx> Xf = dft(slot, -1);   // subcarrier coefficients * M
        std::fill(big.begin(), big.end(), cplx(0.0, 0.0));
        for (int m = 0; m < M; m++) {
            const int mc = m < M / 2 ? m : m - M;   // centered subcarrier
            big[(mc + MO) % MO] = Xf[m] / static_cast<double>(M);
        }
        const std::vector<cplx> wave = dft(big, +1);
        for (int i = 0; i < MO; i++)
            w.samples[(static_cast<size_t>(L - 1) + static_cast<size_t>(ns) * M) * O + i] = wave[i];
    }
    for (int i = 0; i < (L - 1) * O; i++)   // frame CP = cyclic copy of the frame tail
        w.samples[i] = w.samples[static_cast<size_t>(M * N) * O + i];
    return w;
}

DDFrame otfs_demodulate_wave(const OtfsChain& chain, const SampledWaveform& y) {
    const SimConfig& cfg = chain.cfg;
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling;
    const int MO = M * O;
    if (std::abs(y.rate - static_cast<double>(O) * M / cfg.T()) > 1e-6 * y.rate)
        throw std::invalid_argument("otfs_demodulate_wave: waveform rate does not match the chain tier");
    const long ry = std::lround(y.t0 * y.rate);
    if (ry > 0 || ry + static_cast<long>(y.size()) < static_cast<long>(M) * N * O)
        throw std::invalid_argument("otfs_demodulate_wave: waveform shorter than the frame span");

    // CAF samples on the TF grid: per-slot rect integration at each subcarrier
    std::vector<std::vector<cplx>> Ytf(M, std::vector<cplx>(N));   // [m_check][n_check]
    std::vector<cplx> seg(MO);
    for (int ns = 0; ns < N; ns++) {
        const long off = static_cast<long>(ns) * MO - ry;
        for (int i = 0; i < MO; i++) seg[i] = y.samples[off + i];
        const std::vector<cplx> F = dft(seg, -1);
        for (int mcheck = 0; mcheck < M; mcheck++) {
            const int mb = mcheck < M / 2 ? mcheck : mcheck - M;
            Ytf[mcheck][ns] = F[(mb + MO) % MO] / static_cast<double>(MO);
        }
    }
    // SFFT back to DD: IDFT across subcarriers, DFT across slots
    DDFrame Y(M, N);
    std::vector<cplx> col(M);
    std::vector<std::vector<cplx>> rows(M, std::vector<cplx>(N));
    for (int ns = 0; ns < N; ns++) {
        for (int mc = 0; mc < M; mc++) col[mc] = Ytf[mc][ns];
        const std::vector<cplx> x = dft(col, +1);
        for (int m = 0; m < M; m++) rows[m][ns] = x[m];
    }
    for (int m = 0; m < M; m++) {
        const std::vector<cplx> f = dft(rows[m], -1);
        for (int n = 0; n < N; n++) Y.at(m, n) = f[n] / static_cast<double>(N);
    }
    return Y;
}

std::vector<cplx> isfft(const DDFrame& X) {
    const int M = X.M, N = X.N;
    // row-wise N-point IDFT, then column-wise M-point DFT, unitary overall
    std::vector<std::vector<cplx>> rows = oddm_time_samples(X);   // unnormalized IDFT
    std::vector<cplx> tf(static_cast<size_t>(M) * N);
    std::vector<cplx> col(M);
    for (int nd = 0; nd < N; nd++) {
        for (int m = 0; m < M; m++) col[m] = rows[m][nd];
        std::vector<cplx> f = dft(col, -1);
        for (int mg = 0; mg < M; mg++) tf[static_cast<size_t>(nd) * M + mg] = f[mg] / std::sqrt(double(M) * N);
    }
    return tf;
}

DDFrame sfft(const std::vector<cplx>& tf, int M, int N) {
    if (static_cast<int>(tf.size()) != M * N) throw std::invalid_argument("sfft: size mismatch");
    DDFrame X(M, N);
    std::vector<cplx> col(M);
    std::vector<std::vector<cplx>> rows(M, std::vector<cplx>(N));
    for (int nd = 0; nd < N; nd++) {
        for (int mg = 0; mg < M; mg++) col[mg] = tf[static_cast<size_t>(nd) * M + mg];
        std::vector<cplx> x = dft(col, +1);
        for (int m = 0; m < M; m++) rows[m][nd] = x[m] / static_cast<double>(M);
    }
    for (int m = 0; m < M; m++) {
        std::vector<cplx> f = dft(rows[m], -1);
        for (int n = 0; n < N; n++) X.at(m, n) = f[n] * std::sqrt(double(M) * N) / static_cast<double>(N);
    }
    return X;
}

SampledWaveform oddm_reference_waveform(const SimConfig& cfg, const DDFrame& X) {
    const int M = cfg.M, N = cfg.N, O = cfg.oversampling, Q = cfg.Q, L = cfg.L;
    const int MN = M * N;
    const int QO = Q * O;
    const long r0 = -static_cast<long>(L + Q - 1) * O;
    const long r1 = static_cast<long>(MN - 1 + Q) * O;
    const SampledPulse a = build_a(cfg);
    const double dt = 1.0 / a.rate;

    SampledWaveform w;
    w.rate = a.rate;
    w.t0 = static_cast<double>(r0) / w.rate;
    w.samples.assign(static_cast<size_t>(r1 - r0 + 1), 0.0);

    for (int m = 0; m < M; m++) {
        for (int nd = -1; nd < N; nd++) {   // u_cp bursts
            const long c = (static_cast<long>(nd) * M + m) * O;   // burst center on grid
            for (int d = 1; d < 2 * QO; d++) {
                const long r = c + d - QO;
                if (r < r0 || r > r1) continue;
                const double tau = r * dt - m * cfg.sample_interval();   // t - mT/M
                cplx sub = 0.0;
                for (int n = 0; n < N; n++) {
                    const double ph = 2.0 * M_PI * n * tau / (N * cfg.T());
                    sub += X.at(m, n) * cplx(std::cos(ph), std::sin(ph));
                }
                w.samples[r - r0] += a.taps[d] * sub;
            }
        }
    }
    return w;
}

}  // namespace oddm
