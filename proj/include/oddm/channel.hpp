#pragma once

#include "oddm/core.hpp"

namespace oddm {

/** One propagation path: gain, integer delay index, integer Doppler index. */
struct Path {
    cplx gain;
    int l = 0;   // delay, 0 <= l <= L-1; tau = l*T/M
    int k = 0;   // Doppler, |k| <= K; nu = k/(NT)
};

struct PathSet {
    std::vector<Path> paths;
    double speed_kmh = 0.0;     // metadata when EVA-generated
    double carrier_hz = 0.0;

    int P() const { return static_cast<int>(paths.size()); }
    double gain_power() const;   // sum |h|^2
    // Merges duplicate (l,k) placements by gain addition.
    void merge_duplicates();
};

/**
 * Eq.-7 application: y(t) = sum_p h_p x(t - tau_p) e^{j2pi nu_p (t - tau_p)};
 * t is absolute frame time (t = 0 at the first body sample).  Delays must
 * land on the waveform's sample grid.  Output span grows by max delay.
 */
SampledWaveform apply_channel(const SampledWaveform& x, const PathSet& ch, const SimConfig& cfg);

// Circularly-symmetric complex AWGN with per-sample variance
// signal_power_ref * 10^(-snr_db/10); snr_db = +inf leaves x unchanged.
SampledWaveform add_awgn(const SampledWaveform& x, double snr_db, double signal_power_ref,
                         RngStream& rng);

// Average body-sample power of the symbol-tier waveforms with Es = 1 QAM.
double oddm_sample_power_ref(const SimConfig& cfg);   // = O*M/T * (pulse cascade gain)
double otfs_sample_power_ref(const SimConfig& cfg);   // = N (symbol-rate sequence)
double otfs_wave_sample_power_ref(const SimConfig& cfg);   // = O*N (rect waveform tier)

/**
 * Synthetic on-grid channel: P distinct (l,k) pairs with l=0 always included
 * as timing reference, complex Gaussian gains, optional exponential
 * power-delay profile, normalized to sum |h|^2 = 1.  The whole set is rotated
 * so the l=0 reference path has a real positive gain.
 */
enum class DelayProfile { Uniform, Exponential };
PathSet gen_ongrid_channel(int P, const SimConfig& cfg, std::uint64_t seed,
                           DelayProfile profile = DelayProfile::Uniform);

/** One tap of a standardized power-delay profile. */
struct ProfileTap {
    double delay_ns;
    double power_db;
};

// 3GPP EVA profile; by default loaded from a data file (columns delay_ns,power_db).
std::vector<ProfileTap> load_profile_csv(const std::string& path);

/**
 * EVA channel with Clarke Doppler quantized to the DD grid: per tap,
 * l = round(tau*M/T) clipped to [0,L-1]; nu = nu_max cos(theta), theta
 * uniform; k = round(nu*N*T); gain CN(0, P_i); merged and normalized.
 * Throws if nu_max*N*T > K.
 */
PathSet gen_eva_channel(const std::vector<ProfileTap>& profile, double speed_kmh,
                        double carrier_hz, const SimConfig& cfg, std::uint64_t seed);

// PathSet CSV (columns h_re,h_im,l,k).
void write_pathset_csv(const PathSet& ch, const std::string& path);
PathSet read_pathset_csv(const std::string& path);

}  // namespace oddm
