#pragma once

#include <functional>
#include <optional>
#include <string>

#include "oddm/channel.hpp"
#include "oddm/core.hpp"
#include "oddm/detect.hpp"
#include "oddm/psd.hpp"

namespace oddm {

enum class ChannelSource { Ongrid, Eva };

struct ExperimentSpec {
    std::string scenario = "desk";
    SimConfig cfg;                 // verification-tier oversampling in cfg.oversampling
    int link_oversampling = 4;     // Monte-Carlo / io-check tier
    std::vector<double> snr_db = {8, 10, 12, 14};
    int trials = 200;
    int max_trials = 100000;
    int early_stop_errors = 500;
    DetectorSettings detector;     // noise_var filled per SNR point
    bool coded = false;
    ChannelSource channel_source = ChannelSource::Ongrid;
    int P = 4;
    DelayProfile profile = DelayProfile::Uniform;
    double speed_kmh = 120.0;
    double carrier_hz = 5e9;
    std::string eva_profile_path;  // required for ChannelSource::Eva
    int io_trials = 100;
    int psd_frames = 8;
    std::string out_dir = ".";
    int threads = 1;

    SimConfig link_cfg() const {
        SimConfig c = cfg;
        c.oversampling = link_oversampling;
        return c;
    }
};

// Named presets: desk, desk-psd, paper-n64, paper-n32.
ExperimentSpec make_scenario(const std::string& name);
// Overlay config-file keys onto a spec (scenario, cfg fields, harness keys).
void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv);

struct BerRecord {
    double snr_db;
    std::string scheme;   // "oddm" | "otfs"
    bool coded;
    long long bit_errors;
    long long bits;
    long long frames;
    double ber;
    double ci95_halfwidth;
};

double wilson_halfwidth(long long errors, long long bits);

struct IoCheckReport {
    std::vector<double> res_oddm;   // per trial
    std::vector<double> res_otfs;
    double max_oddm, median_oddm;
    double max_otfs, median_otfs;
    double frac_otfs_larger;
};

IoCheckReport run_io_check(const ExperimentSpec& spec);

struct PsdReport {
    PsdEstimate oddm;
    PsdEstimate otfs;
    // gaps (dB, positive = ODDM lower) at 0.55, 0.60, 0.75 of M/T
    double gap_055_db, gap_060_db, gap_075_db;
    double oddm_rel_055_db;   // relative to its own in-band median
    double otfs_rel_055_db;
};

PsdReport run_psd(const ExperimentSpec& spec);
void write_psd_csv(const PsdReport& rep, const std::string& path);

std::vector<BerRecord> run_ber(const ExperimentSpec& spec);
void write_ber_csv(const std::vector<BerRecord>& recs, const std::string& path);

// Interpolated SNR (dB) where BER crosses `target`, log-linear; nullopt when
// the curve does not bracket the target.
std::optional<double> snr_at_ber(const std::vector<BerRecord>& recs, const std::string& scheme,
                                 bool coded, double target);

struct VerifyResult {
    std::string name;
    bool pass;
    std::string detail;
};
std::vector<VerifyResult> run_verify(const ExperimentSpec& spec);

// Simple chunked parallel-for with stable result slots.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace oddm
