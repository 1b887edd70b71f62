#include "oddm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oddm {

double PathSet::gain_power() const {
    double p = 0.0;
    for (const Path& q : paths) p += std::norm(q.gain);
    return p;
}

void PathSet::merge_duplicates() {
    std::map<std::pair<int, int>, cplx> acc;
    for (const Path& p : paths) acc[{p.l, p.k}] += p.gain;
    paths.clear();
    for (const auto& [lk, g] : acc) paths.push_back({g, lk.first, lk.second});
}

SampledWaveform apply_channel(const SampledWaveform& x, const PathSet& ch, const SimConfig& cfg) {
    const int MN = cfg.M * cfg.N;
    int lmax = 0;
    for (const Path& p : ch.paths) {
        if (p.l < 0 || p.l > cfg.L - 1) throw std::invalid_argument("apply_channel: delay index out of range");
        if (std::abs(p.k) > cfg.K) throw std::invalid_argument("apply_channel: Doppler index out of range");
        lmax = std::max(lmax, p.l);
    }
    // delay in samples at this rate
    const double step = cfg.sample_interval() * x.rate;
    const long stepi = std::lround(step);
    if (std::abs(step - static_cast<double>(stepi)) > 1e-6)
        throw std::invalid_argument("apply_channel: delay grid T/M is off the sample grid for this rate");

    const long rx = std::lround(x.t0 * x.rate);
    SampledWaveform y;
    y.rate = x.rate;
    y.t0 = x.t0;
    y.samples.assign(x.size() + static_cast<size_t>(lmax) * stepi, 0.0);

    for (const Path& p : ch.paths) {
        const long off = static_cast<long>(p.l) * stepi;
        // phase e^{j2pi nu (t - tau)}; at output sample r (grid index), the
        // delayed copy's local time is (r - off + rx)/rate relative to... the
        // input sample q sits at output r = q + off with t - tau = q/rate + t0.
        const double w = 2.0 * M_PI * p.k / (cfg.N * cfg.T());
        for (size_t q = 0; q < x.size(); q++) {
            const double ts = (static_cast<double>(rx) + static_cast<double>(q)) / x.rate;
            const double ph = w * ts;
            y.samples[q + off] += p.gain * x.samples[q] * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return y;
}

SampledWaveform add_awgn(const SampledWaveform& x, double snr_db, double signal_power_ref,
                         RngStream& rng) {
    if (std::isinf(snr_db)) return x;
    const double nv = signal_power_ref * std::pow(10.0, -snr_db / 10.0);
    const double s = std::sqrt(nv);
    SampledWaveform y = x;
    for (cplx& v : y.samples) v += s * rng.cgaussian();
    return y;
}

double oddm_sample_power_ref(const SimConfig& cfg) {
    return static_cast<double>(cfg.oversampling) * cfg.M / cfg.T();
}

double otfs_sample_power_ref(const SimConfig& cfg) { return static_cast<double>(cfg.N); }

double otfs_wave_sample_power_ref(const SimConfig& cfg) {
    return static_cast<double>(cfg.oversampling) * cfg.N;
}

PathSet gen_ongrid_channel(int P, const SimConfig& cfg, std::uint64_t seed, DelayProfile profile) {
    const long grid = static_cast<long>(cfg.L) * (2 * cfg.K + 1);
    if (P < 1 || P > grid)
        throw std::invalid_argument("gen_ongrid_channel: P exceeds grid occupancy L*(2K+1)");

    RngStream rng(seed, "channel.ongrid", 0);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(P);
    pairs.emplace_back(0, P == 1 ? 0 : static_cast<int>(rng.uniform_int(2 * cfg.K + 1)) - cfg.K);
    auto has = [&](int l, int k) {
        for (auto& q : pairs)
            if (q.first == l && q.second == k) return true;
        return false;
    };
    while (static_cast<int>(pairs.size()) < P) {
        int l = static_cast<int>(rng.uniform_int(cfg.L));
        int k = static_cast<int>(rng.uniform_int(2 * cfg.K + 1)) - cfg.K;
        if (!has(l, k)) pairs.emplace_back(l, k);
    }

    PathSet ch;
    for (auto& [l, k] : pairs) {
        cplx g = rng.cgaussian();
        if (profile == DelayProfile::Exponential)
            g *= std::exp(-static_cast<double>(l) / std::max(1.0, (cfg.L - 1) / 3.0) / 2.0);
        ch.paths.push_back({g, l, k});
    }
    // rotate so the l=0 reference path has a real positive gain
    const cplx g0 = ch.paths[0].gain;
    const cplx rot = std::abs(g0) > 0 ? std::conj(g0) / std::abs(g0) : cplx(1.0, 0.0);
    const double norm = std::sqrt(ch.gain_power());
    for (Path& p : ch.paths) p.gain *= rot / norm;
    return ch;
}

std::vector<ProfileTap> load_profile_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open profile file: " + path);
    std::vector<ProfileTap> taps;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (std::isalpha(static_cast<unsigned char>(line[line.find_first_not_of(" \t\r")]))) continue;  // header
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::runtime_error("bad profile line: " + line);
        taps.push_back({std::stod(a), std::stod(b)});
    }
    if (taps.empty()) throw std::runtime_error("empty profile file: " + path);
    return taps;
}

PathSet gen_eva_channel(const std::vector<ProfileTap>& profile, double speed_kmh, double carrier_hz,
                        const SimConfig& cfg, std::uint64_t seed) {
    constexpr double c0 = 2.9979e8;
    const double nu_max = (speed_kmh / 3.6) * carrier_hz / c0;
    const double NT = cfg.N * cfg.T();
    if (nu_max * NT > static_cast<double>(cfg.K))
        throw std::invalid_argument("gen_eva_channel: nu_max exceeds K/(NT); K too small for this speed");

    RngStream rng(seed, "channel.eva", 0);
    PathSet ch;
    ch.speed_kmh = speed_kmh;
    ch.carrier_hz = carrier_hz;
    for (const ProfileTap& t : profile) {
        const double tau = t.delay_ns * 1e-9;
        int l = static_cast<int>(std::lround(tau / cfg.sample_interval()));
        l = std::clamp(l, 0, cfg.L - 1);
        const double theta = 2.0 * M_PI * rng.uniform();
        const double nu = nu_max * std::cos(theta);
        const int k = static_cast<int>(std::lround(nu * NT));
        const double amp = std::pow(10.0, t.power_db / 20.0);
        ch.paths.push_back({amp * rng.cgaussian(), l, k});
    }
    ch.merge_duplicates();
    const double norm = std::sqrt(ch.gain_power());
    for (Path& p : ch.paths) p.gain /= norm;
    return ch;
}

void write_pathset_csv(const PathSet& ch, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "h_re,h_im,l,k\n";
    char buf[128];
    for (const Path& p : ch.paths) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", p.gain.real(), p.gain.imag(), p.l, p.k);
        f << buf;
    }
}

PathSet read_pathset_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open pathset file: " + path);
    PathSet ch;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) { header = false; continue; }
        std::istringstream ss(line);
        std::string a, b, c, d;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        std::getline(ss, d);
        ch.paths.push_back({cplx(std::stod(a), std::stod(b)), std::stoi(c), std::stoi(d)});
    }
    return ch;
}

}  // namespace oddm
