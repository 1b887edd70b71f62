#pragma once

#include "oddm/core.hpp"
#include "oddm/pulse.hpp"

namespace oddm {

// Digital core shared by ODDM and OTFS ------------------------------------

// Row m of the result is the unnormalized N-point inverse DFT of X[m,.]:
// x[m,nd] = sum_n X[m,n] e^{+j2pi nd n / N}.
std::vector<std::vector<cplx>> oddm_time_samples(const DDFrame& X);

// Interleave M rows of N samples into MN samples: out[m + nd*M] = x[m][nd].
std::vector<cplx> oddm_stagger(const std::vector<std::vector<cplx>>& rows);
std::vector<std::vector<cplx>> oddm_destagger(const std::vector<cplx>& seq, int M, int N);

/**
 * ODDM transmit chain: sample-wise square-root-Nyquist shaping of the
 * staggered sequence (Lemma-1 route) with a frame-level CP.
 *
 * The digital sequence is cyclically extended at the head by L-1+2Q samples
 * (the L-1 CP copies plus the lead-in copies whose shaped tails fall inside
 * the transmit span) before FIR filtering; the output spans
 * t in [-(L+Q-1)*T/M, (N-1)T + Q*T/M].
 */
struct OddmTxChain {
    SimConfig cfg;
    SampledPulse a;

    explicit OddmTxChain(const SimConfig& c) : cfg(c), a(build_a(c)) {}
};

// oversampled=false uses a copy of cfg with oversampling=1.
SampledWaveform oddm_modulate(const OddmTxChain& chain, const DDFrame& X);
SampledWaveform oddm_modulate(const SimConfig& cfg, const DDFrame& X);

/**
 * Matched filter by a(-t)=a(t), CP discard, downsample by M into N-sample
 * branches, unnormalized N-point DFT per branch.  The correlation carries the
 * Riemann weight 1/rate, so an identity channel returns X with gain 1.
 * Accepts any waveform whose rate matches the chain's pulse and whose span
 * covers the frame body plus pulse tails.
 */
DDFrame oddm_demodulate(const OddmTxChain& chain, const SampledWaveform& y);
DDFrame oddm_demodulate(const SimConfig& cfg, const SampledWaveform& y);

// OTFS baseline -------------------------------------------------------------

struct OtfsChain {
    SimConfig cfg;
    int sinc_zeros = 50;   // interpolation filter truncation (50th zero crossing)

    explicit OtfsChain(const SimConfig& c) : cfg(c) {}
};

// Symbol-rate discrete link path: the same MN digital sequence as ODDM with a
// frame-level CP of L-1 samples; rate M/T, t0 = -(L-1)*T/M.
SampledWaveform otfs_modulate(const OtfsChain& chain, const DDFrame& X);

// Rectangular receive pulse: CP discard, per-branch unnormalized DFT scaled
// by 1/N (slot DFT + SFFT collapse to the row-wise transform).
DDFrame otfs_demodulate(const OtfsChain& chain, const SampledWaveform& y);

// Oversampled PSD-path waveform: per-slot DAC interpolation with a truncated
// sinc (sinc_zeros zero crossings) followed by rect_T slot windowing; frame CP
// prepended at sequence level.  rate O*M/T.
SampledWaveform otfs_waveform_psd(const OtfsChain& chain, const DDFrame& X);

/**
 * Oversampled link-path pair: the exact rect-windowed per-slot subcarrier
 * waveform (Eq.-4 form) with a frame CP, and the slot-wise CAF-sampling
 * receiver (rect receive pulse integrated over each slot) followed by the
 * SFFT.  At oversampling 1 these collapse to otfs_modulate/otfs_demodulate;
 * at higher tiers they expose the rect pulse's delay/Doppler misalignment
 * that the Eq.-12 model only approximates.
 */
SampledWaveform otfs_modulate_wave(const OtfsChain& chain, const DDFrame& X);
DDFrame otfs_demodulate_wave(const OtfsChain& chain, const SampledWaveform& y);

// ISFFT / SFFT pair (unitary), used by tests and the TF-plane view.
// X_tf[mg + M*ng] = 1/sqrt(MN) sum_{m,n} X[m,n] e^{j2pi(ng n/N - mg m/M)}
std::vector<cplx> isfft(const DDFrame& X);
DDFrame sfft(const std::vector<cplx>& tf, int M, int N);

// Direct Eq.-22-style reference: sum_{m,n} X[m,n] u_cp(t-mT/M) e^{j2pi n(t-mT/M)/NT}
// evaluated on the oversampled grid of `w` (same span); used as the Lemma-1
// comparison oracle and by tests.
SampledWaveform oddm_reference_waveform(const SimConfig& cfg, const DDFrame& X);

}  // namespace oddm
