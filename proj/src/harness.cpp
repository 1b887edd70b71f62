#include "oddm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "oddm/coding.hpp"
#include "oddm/modem.hpp"

namespace oddm {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; i++) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; t++) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double wilson_halfwidth(long long errors, long long bits) {
    if (bits <= 0) return 0.0;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    return z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / (1.0 + z * z / n);
}

ExperimentSpec make_scenario(const std::string& name) {
    ExperimentSpec s;
    s.scenario = name;
    if (name == "desk") {
        s.cfg = SimConfig{64, 16, 15e3, 20, 0.1, 9, 3, 16, 1};
        s.P = 4;
    } else if (name == "desk-psd") {
        s.cfg = SimConfig{128, 16, 15e3, 20, 0.1, 9, 3, 16, 1};
        s.P = 4;
    } else if (name == "paper-n64") {
        s.cfg = SimConfig{512, 64, 15e3, 20, 0.1, 25, 3, 16, 1};
        s.channel_source = ChannelSource::Eva;
        s.speed_kmh = 120.0;
        s.eva_profile_path = "data/eva_profile.csv";
    } else if (name == "paper-n32") {
        s.cfg = SimConfig{512, 32, 15e3, 20, 0.1, 25, 5, 16, 1};
        s.channel_source = ChannelSource::Eva;
        s.speed_kmh = 500.0;
        s.eva_profile_path = "data/eva_profile.csv";
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    return s;
}

void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv) {
    std::map<std::string, std::string> cfg_kv = {
        {"M", std::to_string(spec.cfg.M)},
        {"N", std::to_string(spec.cfg.N)},
        {"delta_f", std::to_string(spec.cfg.delta_f)},
        {"Q", std::to_string(spec.cfg.Q)},
        {"rolloff", std::to_string(spec.cfg.rolloff)},
        {"L", std::to_string(spec.cfg.L)},
        {"K", std::to_string(spec.cfg.K)},
        {"oversampling", std::to_string(spec.cfg.oversampling)},
        {"seed", std::to_string(spec.cfg.seed)},
    };
    for (const auto& [k, v] : kv)
        if (cfg_kv.count(k)) cfg_kv[k] = v;
    spec.cfg = make_config(cfg_kv);

    auto geti = [&](const char* k, int& dst) {
        if (kv.count(k)) dst = std::stoi(kv.at(k));
    };
    geti("link_oversampling", spec.link_oversampling);
    geti("trials", spec.trials);
    geti("max_trials", spec.max_trials);
    geti("early_stop_errors", spec.early_stop_errors);
    geti("P", spec.P);
    geti("io_trials", spec.io_trials);
    geti("psd_frames", spec.psd_frames);
    geti("threads", spec.threads);
    geti("mp_iters", spec.detector.max_iters);
    if (kv.count("mp_damping")) spec.detector.damping = std::stod(kv.at("mp_damping"));
    if (kv.count("mp_tol")) spec.detector.convergence_tol = std::stod(kv.at("mp_tol"));
    if (kv.count("coded")) spec.coded = kv.at("coded") == "1" || kv.at("coded") == "true";
    if (kv.count("speed_kmh")) spec.speed_kmh = std::stod(kv.at("speed_kmh"));
    if (kv.count("carrier_hz")) spec.carrier_hz = std::stod(kv.at("carrier_hz"));
    if (kv.count("eva_profile")) spec.eva_profile_path = kv.at("eva_profile");
    if (kv.count("channel")) {
        const std::string& c = kv.at("channel");
        if (c == "ongrid") spec.channel_source = ChannelSource::Ongrid;
        else if (c == "eva") spec.channel_source = ChannelSource::Eva;
        else throw std::invalid_argument("config: channel must be ongrid or eva");
    }
    if (kv.count("profile")) {
        const std::string& p = kv.at("profile");
        if (p == "uniform") spec.profile = DelayProfile::Uniform;
        else if (p == "exponential") spec.profile = DelayProfile::Exponential;
        else throw std::invalid_argument("config: profile must be uniform or exponential");
    }
    if (kv.count("snr_db")) {
        spec.snr_db.clear();
        std::string s = kv.at("snr_db");
        for (char& ch : s)
            if (ch == ',') ch = ' ';
        std::istringstream ss(s);
        double v;
        while (ss >> v) spec.snr_db.push_back(v);
        if (spec.snr_db.empty()) throw std::invalid_argument("config: empty snr_db list");
    }
    if (spec.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
}

namespace {

PathSet make_trial_channel(const ExperimentSpec& spec, const SimConfig& cfg, std::uint64_t tseed) {
    if (spec.channel_source == ChannelSource::Eva) {
        const std::vector<ProfileTap> profile = load_profile_csv(spec.eva_profile_path);
        return gen_eva_channel(profile, spec.speed_kmh, spec.carrier_hz, cfg, tseed);
    }
    return gen_ongrid_channel(spec.P, cfg, tseed, spec.profile);
}

std::vector<std::uint8_t> random_bits(RngStream& rng, size_t n) {
    std::vector<std::uint8_t> b(n);
    for (size_t i = 0; i < n; i++) b[i] = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return b;
}

}  // namespace

IoCheckReport run_io_check(const ExperimentSpec& spec) {
    const SimConfig cfg = spec.link_cfg();
    const Constellation qam = Constellation::qam4();
    const int R = spec.io_trials;

    IoCheckReport rep;
    rep.res_oddm.resize(R);
    rep.res_otfs.resize(R);

    parallel_for(R, spec.threads, [&](int t) {
        const std::uint64_t chseed = RngStream(cfg.seed, "io.chan", t).next_u64();
        const PathSet ch = make_trial_channel(spec, cfg, chseed);
        RngStream brng(cfg.seed, "io.bits", t);
        const DDFrame X = map_bits(random_bits(brng, static_cast<size_t>(cfg.M) * cfg.N * 2), qam,
                                   cfg.M, cfg.N);

        // ODDM: waveform chain vs exact H
        const OddmTxChain chain(cfg);
        const SampledWaveform tx = oddm_modulate(chain, X);
        const SampledWaveform rx = apply_channel(tx, ch, cfg);
        const DDFrame Y = oddm_demodulate(chain, rx);
        const DDChannelMatrix H = build_H(ch, cfg);
        const std::vector<cplx> Yh = apply_H(H, stack(X));
        double num = 0.0, den = 0.0;
        for (int i = 0; i < cfg.M * cfg.N; i++) {
            num += std::norm(Y.data[i] - Yh[i]);
            den += std::norm(Yh[i]);
        }
        rep.res_oddm[t] = std::sqrt(num / den);

        // OTFS: rect-waveform chain (CAF receiver) vs Eq.-12 model
        const OtfsChain otfs(cfg);
        const SampledWaveform txo = otfs_modulate_wave(otfs, X);
        const SampledWaveform rxo = apply_channel(txo, ch, cfg);
        const DDFrame Yo = otfs_demodulate_wave(otfs, rxo);
        const OtfsDDMatrix Ho = build_otfs_H(ch, cfg);
        const std::vector<cplx> Yho = apply_otfs_H(Ho, stack(X));
        num = den = 0.0;
        for (int i = 0; i < cfg.M * cfg.N; i++) {
            num += std::norm(Yo.data[i] - Yho[i]);
            den += std::norm(Yho[i]);
        }
        rep.res_otfs[t] = std::sqrt(num / den);
    });

    auto med = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    rep.max_oddm = *std::max_element(rep.res_oddm.begin(), rep.res_oddm.end());
    rep.max_otfs = *std::max_element(rep.res_otfs.begin(), rep.res_otfs.end());
    rep.median_oddm = med(rep.res_oddm);
    rep.median_otfs = med(rep.res_otfs);
    int larger = 0;
    for (int t = 0; t < R; t++)
        if (rep.res_otfs[t] > rep.res_oddm[t]) larger++;
    rep.frac_otfs_larger = static_cast<double>(larger) / R;
    return rep;
}

PsdReport run_psd(const ExperimentSpec& spec) {
    const SimConfig& cfg = spec.cfg;   // oversampled tier
    const Constellation qam = Constellation::qam4();
    const int F = spec.psd_frames;

    std::vector<cplx> xo, xt;
    for (int f = 0; f < F; f++) {
        RngStream brng(cfg.seed, "psd.bits", f);
        const DDFrame X = map_bits(random_bits(brng, static_cast<size_t>(cfg.M) * cfg.N * 2), qam,
                                   cfg.M, cfg.N);
        const SampledWaveform wo = oddm_modulate(cfg, X);
        xo.insert(xo.end(), wo.samples.begin(), wo.samples.end());
        const OtfsChain chain(cfg);
        const SampledWaveform wt = otfs_waveform_psd(chain, X);
        xt.insert(xt.end(), wt.samples.begin(), wt.samples.end());
    }
    auto norm_power = [](std::vector<cplx>& x) {
        double p = 0.0;
        for (const cplx& v : x) p += std::norm(v);
        p = std::sqrt(p / x.size());
        for (cplx& v : x) v /= p;
    };
    norm_power(xo);
    norm_power(xt);

    const double fs = cfg.oversampling * cfg.M / cfg.T();
    const int seg = 4096 * cfg.oversampling;
    PsdReport rep;
    rep.oddm = welch_psd(xo, seg, fs);
    rep.otfs = welch_psd(xt, seg, fs);

    const double MT = cfg.M / cfg.T();
    const double hw = 0.004 * MT;
    const double mo = rep.oddm.inband_median(0.45 * MT);
    const double mt = rep.otfs.inband_median(0.45 * MT);
    auto gap = [&](double frac) {
        const double lo = rep.oddm.level_at(frac * MT, hw) / mo;
        const double lt = rep.otfs.level_at(frac * MT, hw) / mt;
        return 10.0 * std::log10(lt / lo);
    };
    rep.gap_055_db = gap(0.55);
    rep.gap_060_db = gap(0.60);
    rep.gap_075_db = gap(0.75);
    rep.oddm_rel_055_db = 10.0 * std::log10(rep.oddm.level_at(0.55 * MT, hw) / mo);
    rep.otfs_rel_055_db = 10.0 * std::log10(rep.otfs.level_at(0.55 * MT, hw) / mt);
    return rep;
}

void write_psd_csv(const PsdReport& rep, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "freq_hz,oddm_db,otfs_db\n";
    const double po = rep.oddm.peak();
    const double pt = rep.otfs.peak();
    char buf[128];
    for (size_t i = 0; i < rep.oddm.freq_hz.size(); i++) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", rep.oddm.freq_hz[i],
                      10.0 * std::log10(std::max(rep.oddm.psd[i] / po, 1e-300)),
                      10.0 * std::log10(std::max(rep.otfs.psd[i] / pt, 1e-300)));
        f << buf;
    }
}

namespace {

struct TrialCounts {
    long long err[4] = {0, 0, 0, 0};   // [oddm, otfs, oddm_coded, otfs_coded]
    long long bits[4] = {0, 0, 0, 0};
};

// One Monte-Carlo trial at one SNR point: shared channel and frames across
// schemes, per-scheme noise streams.
TrialCounts ber_trial(const ExperimentSpec& spec, const SimConfig& cfg, double snr_db, int snr_idx,
                      int trial) {
    const Constellation qam = Constellation::qam4();
    const int MN = cfg.M * cfg.N;
    const std::uint64_t sidx = static_cast<std::uint64_t>(snr_idx) * 1000003ULL + trial;

    const std::uint64_t chseed = RngStream(cfg.seed, "ber.chan", sidx).next_u64();
    const PathSet ch = make_trial_channel(spec, cfg, chseed);

    DetectorSettings det = spec.detector;
    det.noise_var = std::pow(10.0, -snr_db / 10.0);

    TrialCounts out;

    // uncoded + optional coded frame payloads
    RngStream brng(cfg.seed, "ber.bits", sidx);
    const std::vector<std::uint8_t> bits_u = random_bits(brng, static_cast<size_t>(MN) * 2);

    std::vector<std::uint8_t> info, framebits_c;
    const ConvCode code;
    static const int pairs_margin = ConvCode::kTailPairs;
    const int pairs = (2 * MN) / 3 - pairs_margin;
    if (spec.coded) {
        RngStream crng(cfg.seed, "ber.bits.coded", sidx);
        info = random_bits(crng, static_cast<size_t>(2) * pairs);
        const std::vector<std::uint8_t> cw = code.encode(info);
        const std::vector<int> perm = make_interleaver(static_cast<int>(cw.size()), cfg.seed);
        framebits_c = interleave(cw, perm);
        framebits_c.resize(static_cast<size_t>(2) * MN, 0);   // zero padding
    }

    for (int scheme = 0; scheme < 2; scheme++) {
        const bool oddm = scheme == 0;
        for (int coded = 0; coded < (spec.coded ? 2 : 1); coded++) {
            const std::vector<std::uint8_t>& fb = coded ? framebits_c : bits_u;
            const DDFrame X = map_bits(fb, qam, cfg.M, cfg.N);

            RngStream nrng(cfg.seed, coded ? (oddm ? "ber.noise.oddm.c" : "ber.noise.otfs.c")
                                           : (oddm ? "ber.noise.oddm" : "ber.noise.otfs"),
                           sidx);
            std::vector<double> post;
            std::vector<int> hard;
            if (oddm) {
                const OddmTxChain chain(cfg);
                SampledWaveform w = oddm_modulate(chain, X);
                w = apply_channel(w, ch, cfg);
                w = add_awgn(w, snr_db, oddm_sample_power_ref(cfg), nrng);
                const DDFrame Y = oddm_demodulate(chain, w);
                const DDChannelMatrix H = build_H(ch, cfg);
                const FactorGraph g = build_graph(H);
                MpResult r = mp_detect(Y.data, g, det, qam);
                post = std::move(r.posterior);
                hard = std::move(r.hard);
            } else {
                const OtfsChain chain(cfg);
                SampledWaveform w = otfs_modulate_wave(chain, X);
                w = apply_channel(w, ch, cfg);
                w = add_awgn(w, snr_db, otfs_wave_sample_power_ref(cfg), nrng);
                const DDFrame Y = otfs_demodulate_wave(chain, w);
                const OtfsDDMatrix H = build_otfs_H(ch, cfg);
                const FactorGraph g = build_graph(H);
                MpResult r = mp_detect(Y.data, g, det, qam);
                post = std::move(r.posterior);
                hard = std::move(r.hard);
            }

            const int slot = scheme + (coded ? 2 : 0);
            if (!coded) {
                std::vector<std::uint8_t> rx(static_cast<size_t>(MN) * 2);
                for (int i = 0; i < MN; i++) qam.unmap(hard[i], &rx[static_cast<size_t>(i) * 2]);
                for (size_t i = 0; i < rx.size(); i++)
                    if (rx[i] != bits_u[i]) out.err[slot]++;
                out.bits[slot] += 2 * MN;
            } else {
                std::vector<double> llrs = soft_llrs(post, qam);
                const std::vector<int> perm = make_interleaver(3 * (pairs + pairs_margin), cfg.seed);
                llrs.resize(perm.size());   // drop padding positions
                const std::vector<double> dl = deinterleave(llrs, perm);
                const std::vector<std::uint8_t> dec = code.decode(dl);
                for (size_t i = 0; i < info.size(); i++)
                    if (dec[i] != info[i]) out.err[slot]++;
                out.bits[slot] += static_cast<long long>(info.size());
            }
        }
    }
    return out;
}

}  // namespace

std::vector<BerRecord> run_ber(const ExperimentSpec& spec) {
    const SimConfig cfg = spec.link_cfg();
    const int nvar = spec.coded ? 4 : 2;
    static const char* names[4] = {"oddm", "otfs", "oddm", "otfs"};

    std::vector<BerRecord> recs;
    for (int si = 0; si < static_cast<int>(spec.snr_db.size()); si++) {
        const double snr = spec.snr_db[si];
        std::vector<TrialCounts> results;
        results.reserve(spec.trials);
        const int chunk = std::max(spec.threads * 4, 16);
        bool done = false;
        while (!done && static_cast<int>(results.size()) < spec.trials) {
            const int base = static_cast<int>(results.size());
            const int n = std::min(chunk, spec.trials - base);
            results.resize(base + n);
            parallel_for(n, spec.threads,
                         [&](int i) { results[base + i] = ber_trial(spec, cfg, snr, si, base + i); });
            // prefix early-stop: all variants past the error budget
            long long acc[4] = {0, 0, 0, 0};
            done = true;
            for (const TrialCounts& tc : results)
                for (int v = 0; v < nvar; v++) acc[v] += tc.err[v];
            for (int v = 0; v < nvar; v++)
                if (acc[v] < spec.early_stop_errors) done = false;
        }
        // per-variant prefix counts
        for (int v = 0; v < nvar; v++) {
            long long err = 0, bits = 0, frames = 0;
            for (const TrialCounts& tc : results) {
                err += tc.err[v];
                bits += tc.bits[v];
                frames++;
                if (err >= spec.early_stop_errors) break;
            }
            BerRecord r;
            r.snr_db = snr;
            r.scheme = names[v];
            r.coded = v >= 2;
            r.bit_errors = err;
            r.bits = bits;
            r.frames = frames;
            r.ber = bits > 0 ? static_cast<double>(err) / bits : 0.0;
            r.ci95_halfwidth = wilson_halfwidth(err, bits);
            recs.push_back(r);
        }
    }
    return recs;
}

void write_ber_csv(const std::vector<BerRecord>& recs, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "es_n0_db,scheme,coded,frames,bits,bit_errors,ber,ci95_halfwidth\n";
    char buf[192];
    for (const BerRecord& r : recs) {
        std::snprintf(buf, sizeof buf, "%.3f,%s,%d,%lld,%lld,%lld,%.9e,%.9e\n", r.snr_db,
                      r.scheme.c_str(), r.coded ? 1 : 0, r.frames, r.bits, r.bit_errors, r.ber,
                      r.ci95_halfwidth);
        f << buf;
    }
}

std::optional<double> snr_at_ber(const std::vector<BerRecord>& recs, const std::string& scheme,
                                 bool coded, double target) {
    std::vector<std::pair<double, double>> pts;   // (snr, ber)
    for (const BerRecord& r : recs)
        if (r.scheme == scheme && r.coded == coded && r.ber > 0.0) pts.emplace_back(r.snr_db, r.ber);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 1; i < pts.size(); i++) {
        const auto [s0, b0] = pts[i - 1];
        const auto [s1, b1] = pts[i];
        if ((b0 >= target && b1 <= target) || (b0 <= target && b1 >= target)) {
            if (b0 == b1) return s0;
            const double t = (std::log10(target) - std::log10(b0)) / (std::log10(b1) - std::log10(b0));
            return s0 + t * (s1 - s0);
        }
    }
    return std::nullopt;
}

std::vector<VerifyResult> run_verify(const ExperimentSpec& spec) {
    std::vector<VerifyResult> out;
    char buf[256];
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        out.push_back({name, pass, detail});
    };

    const SimConfig& cfg = spec.cfg;
    const Constellation qam = Constellation::qam4();

    {
        const SampledPulse a = build_a(cfg);
        const SampledPulse u = build_u(cfg);
        const double ea = std::abs(a.energy() - 1.0 / cfg.N);
        const double eu = std::abs(u.energy() - 1.0);
        std::snprintf(buf, sizeof buf, "|E(a)-1/N|=%.2e |E(u)-1|=%.2e", ea, eu);
        add("pulse-energy", ea <= 1e-9 && eu <= 1e-6, buf);
    }
    {
        const AmbiguityReport rep = verify_orthogonality(cfg, 1e-2);
        const bool pass = std::abs(rep.origin - 1.0) <= 1e-6 && rep.max_off_origin <= 1e-2 &&
                          rep.max_n0_row <= 1e-3;
        std::snprintf(buf, sizeof buf, "origin=%.8f max_off=%.2e (m=%d,n=%d) n0_row=%.2e", rep.origin,
                      rep.max_off_origin, rep.argmax_m, rep.argmax_n, rep.max_n0_row);
        add("pulse-orthogonality", pass, buf);
    }
    {
        RngStream rng(cfg.seed, "verify.lemma1", 0);
        std::vector<std::uint8_t> b(static_cast<size_t>(cfg.M) * cfg.N * 2);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng.next_u64() & 1);
        const DDFrame X = map_bits(b, qam, cfg.M, cfg.N);
        const SampledWaveform w = oddm_modulate(cfg, X);
        const SampledWaveform ref = oddm_reference_waveform(cfg, X);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < w.samples.size(); i++) {
            num += std::norm(w.samples[i] - ref.samples[i]);
            den += std::norm(ref.samples[i]);
        }
        const double rel = std::sqrt(num / den);
        std::snprintf(buf, sizeof buf, "waveform rel L2 vs u_cp form = %.3e", rel);
        add("lemma1-equivalence", rel <= 6e-2, buf);
    }
    {
        ExperimentSpec s = spec;
        s.io_trials = std::min(spec.io_trials, 20);
        const IoCheckReport io = run_io_check(s);
        std::snprintf(buf, sizeof buf, "oddm max=%.2e med=%.2e otfs med=%.2e otfs>oddm %.0f%%",
                      io.max_oddm, io.median_oddm, io.median_otfs, 100.0 * io.frac_otfs_larger);
        add("io-equivalence", io.max_oddm <= 1e-2 && io.median_oddm <= 3e-3 && io.frac_otfs_larger >= 0.95,
            buf);
    }
    {
        const SimConfig lcfg = spec.link_cfg();
        const std::uint64_t cs = RngStream(cfg.seed, "verify.chan", 0).next_u64();
        const PathSet ch = gen_ongrid_channel(spec.P, lcfg, cs, spec.profile);
        const DDChannelMatrix H = build_H(ch, lcfg);
        const FactorGraph g = build_graph(H);
        RngStream rng(cfg.seed, "verify.mp", 0);
        std::vector<std::uint8_t> b(static_cast<size_t>(lcfg.M) * lcfg.N * 2);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng.next_u64() & 1);
        const DDFrame X = map_bits(b, qam, lcfg.M, lcfg.N);
        std::vector<cplx> y = apply_H(H, stack(X));
        DetectorSettings det = spec.detector;
        det.noise_var = 1e-4;
        const MpResult r = mp_detect(y, g, det, qam);
        double worst = 0.0;
        for (int v = 0; v < lcfg.M * lcfg.N; v++) {
            double s = 0.0;
            for (int a = 0; a < qam.size(); a++) s += r.posterior[static_cast<size_t>(v) * qam.size() + a];
            worst = std::max(worst, std::abs(s - 1.0));
        }
        int errs = 0;
        for (int i = 0; i < lcfg.M * lcfg.N; i++)
            if (qam.points[r.hard[i]] != X.data[i]) errs++;
        std::snprintf(buf, sizeof buf, "posterior row-sum err=%.1e, noiseless symbol errors=%d/%d",
                      worst, errs, lcfg.M * lcfg.N);
        add("mp-detector", worst <= 1e-9 && errs == 0, buf);
    }
    {
        // DD-domain noise whiteness after matched filtering, no signal
        const SimConfig lcfg = spec.link_cfg();
        const OddmTxChain chain(lcfg);
        RngStream nrng(cfg.seed, "verify.noise", 0);
        const DDFrame zero(lcfg.M, lcfg.N);
        SampledWaveform w = oddm_modulate(chain, zero);
        w = add_awgn(w, 0.0, oddm_sample_power_ref(lcfg), nrng);
        const DDFrame Y = oddm_demodulate(chain, w);
        cplx r0 = 0.0, r1 = 0.0;
        for (int m = 0; m < lcfg.M; m++)
            for (int n = 0; n < lcfg.N; n++) {
                r0 += Y.at(m, n) * std::conj(Y.at(m, n));
                if (n + 1 < lcfg.N) r1 += Y.at(m, n + 1) * std::conj(Y.at(m, n));
            }
        const double rho = std::abs(r1) / std::abs(r0);
        std::snprintf(buf, sizeof buf, "within-block lag-1 autocorr = %.3f", rho);
        add("noise-whiteness", rho <= 0.05, buf);
    }
    {
        ExperimentSpec s = spec;
        s.snr_db = {10.0};
        s.trials = 4;
        s.early_stop_errors = 1 << 30;
        const std::vector<BerRecord> a = run_ber(s);
        ExperimentSpec s2 = s;
        s2.threads = std::max(2, spec.threads);
        const std::vector<BerRecord> b = run_ber(s2);
        bool same = a.size() == b.size();
        for (size_t i = 0; same && i < a.size(); i++)
            same = a[i].bit_errors == b[i].bit_errors && a[i].bits == b[i].bits;
        std::snprintf(buf, sizeof buf, "serial vs parallel counts identical = %s", same ? "yes" : "no");
        add("determinism", same, buf);
    }
    return out;
}

}  // namespace oddm
