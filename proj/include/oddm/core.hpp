#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oddm {

using cplx = std::complex<double>;

/**
 * Scenario parameters shared by every module.
 *
 * M      number of ODDM symbols / delay bins (OTFS: subcarriers)
 * N      subcarriers per ODDM symbol / Doppler bins (OTFS: time slots)
 * delta_f  TF-plane subcarrier spacing 1/T in Hz
 * Q      one-sided pulse half-span in units of T/M
 * rolloff  square-root raised-cosine roll-off
 * L      CP length is (L-1)*(T/M); path delays satisfy 0 <= l <= L-1
 * K      maximum Doppler index, |k| <= K
 * oversampling  emulated continuous-time samples per T/M interval
 * seed   master RNG seed; every consumer derives its own stream
 */
struct SimConfig {
    int M = 64;
    int N = 16;
    double delta_f = 15e3;
    int Q = 20;
    double rolloff = 0.1;
    int L = 9;
    int K = 3;
    int oversampling = 16;
    std::uint64_t seed = 1;

    double T() const { return 1.0 / delta_f; }
    double sample_interval() const { return T() / M; }   // delay resolution
    double frame_span() const { return N * T(); }
    double doppler_resolution() const { return 1.0 / (N * T()); }
    int grid_size() const { return M * N; }

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

// Builds a validated SimConfig from a key=value map (missing keys keep defaults
// only for keys not listed in `required`; see config file parsing below).
SimConfig make_config(const std::map<std::string, std::string>& kv);

/** Gray-labelled square-QAM constellation with unit average energy. */
struct Constellation {
    std::vector<cplx> points;   // index = symbol label
    int bits_per_symbol = 0;

    static Constellation qam4();

    int size() const { return static_cast<int>(points.size()); }
    // Gray label of `bits_per_symbol` bits -> point index (identity labelling:
    // the point list is already stored in Gray order).
    int map_bits(const std::uint8_t* bits) const;
    void unmap(int index, std::uint8_t* bits) const;
    // Nearest-point hard decision.
    int slice(cplx v) const;
};

/** M x N complex symbol grid X[m][n], m = delay index, n = Doppler index. */
struct DDFrame {
    int M = 0;
    int N = 0;
    std::vector<cplx> data;   // delay-major: data[m*N + n]

    DDFrame() = default;
    DDFrame(int M_, int N_) : M(M_), N(N_), data(static_cast<size_t>(M_) * N_) {}

    cplx& at(int m, int n) { return data[static_cast<size_t>(m) * N + n]; }
    cplx at(int m, int n) const { return data[static_cast<size_t>(m) * N + n]; }
};

// Delay-major stacking [x_0; ...; x_{M-1}] with x_m = X[m,.]; DDFrame already
// stores that layout, these are provided for intent at call sites.
inline const std::vector<cplx>& stack(const DDFrame& f) { return f.data; }
DDFrame unstack(const std::vector<cplx>& v, int M, int N);

/**
 * Complex baseband sample sequence.  rate is samples per second; the time of
 * sample q is t0 + q/rate.  t0 may be negative (CP and pulse tails precede
 * t = 0, the first frame-body sample).
 */
struct SampledWaveform {
    std::vector<cplx> samples;
    double rate = 0.0;
    double t0 = 0.0;

    size_t size() const { return samples.size(); }
    double energy() const;   // sum |s|^2 / rate
};

// ---------------------------------------------------------------------------
// RNG streams: one master seed, per-(purpose, index) derived streams so that
// parallel sweeps reproduce serial runs bit-exactly.
// ---------------------------------------------------------------------------

class RngStream {
  public:
    RngStream(std::uint64_t master, const std::string& purpose, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform();                    // [0,1)
    double gaussian();                   // N(0,1), Box-Muller
    cplx cgaussian();                    // CN(0,1)
    std::uint64_t uniform_int(std::uint64_t n);   // [0,n)

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// bits: MN*bits_per_symbol entries of 0/1, mapped delay-major then Doppler.
DDFrame map_bits(const std::vector<std::uint8_t>& bits, const Constellation& c, int M, int N);
std::vector<std::uint8_t> demap_frame(const DDFrame& f, const Constellation& c);

// Flat `key = value` config file with '#' comments.  Later keys override.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace oddm
