#include "oddm/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oddm {

void SimConfig::validate() const {
    if (M <= 0) throw std::invalid_argument("config: M must be positive");
    if (N <= 0) throw std::invalid_argument("config: N must be positive");
    if (delta_f <= 0) throw std::invalid_argument("config: delta_f must be positive");
    if (Q <= 0) throw std::invalid_argument("config: Q must be positive");
    if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("config: rolloff outside [0,1]");
    if (L <= 0) throw std::invalid_argument("config: L must be positive");
    if (K < 0) throw std::invalid_argument("config: K must be nonnegative");
    if (oversampling <= 0) throw std::invalid_argument("config: oversampling must be positive");
    if (2 * Q >= M) throw std::invalid_argument("config: 2Q >= M");
    if (L - 1 + 2 * Q >= M * N) throw std::invalid_argument("config: L-1+2Q >= M*N");
    if (2 * K >= N) throw std::invalid_argument("config: K >= N/2");
}

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) pos++;
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    double d = to_double(key, v);
    long long r = std::llround(d);
    if (std::abs(d - static_cast<double>(r)) > 1e-9)
        throw std::invalid_argument("config: '" + key + "' must be an integer");
    return static_cast<int>(r);
}

}  // namespace

SimConfig make_config(const std::map<std::string, std::string>& kv) {
    static const char* required[] = {"M", "N", "delta_f", "Q", "rolloff", "L", "K"};
    for (const char* k : required)
        if (!kv.count(k)) throw std::invalid_argument(std::string("config: missing key '") + k + "'");

    SimConfig c;
    c.M = to_int("M", kv.at("M"));
    c.N = to_int("N", kv.at("N"));
    c.delta_f = to_double("delta_f", kv.at("delta_f"));
    c.Q = to_int("Q", kv.at("Q"));
    c.rolloff = to_double("rolloff", kv.at("rolloff"));
    c.L = to_int("L", kv.at("L"));
    c.K = to_int("K", kv.at("K"));
    if (kv.count("oversampling")) c.oversampling = to_int("oversampling", kv.at("oversampling"));
    if (kv.count("seed")) c.seed = static_cast<std::uint64_t>(std::stoull(kv.at("seed")));
    c.validate();
    return c;
}

Constellation Constellation::qam4() {
    const double s = 1.0 / std::sqrt(2.0);
    Constellation c;
    // Gray map: 00,01,11,10 -> quadrants (+,+),( -,+),(-,-),(+,-)
    c.points = {cplx(s, s), cplx(-s, s), cplx(-s, -s), cplx(s, -s)};
    c.bits_per_symbol = 2;
    return c;
}

int Constellation::map_bits(const std::uint8_t* bits) const {
    // bits in natural order; consecutive Gray codes differ in one bit.
    // For 4-QAM the Gray sequence is 00,01,11,10 -> indices 0,1,2,3.
    int v = 0;
    for (int i = 0; i < bits_per_symbol; i++) v = (v << 1) | (bits[i] & 1);
    // binary -> Gray rank (inverse of rank -> Gray code)
    // points[] is stored in Gray-code order, so convert the bit pattern to its rank.
    int rank = 0;
    for (int g = v; g; g >>= 1) rank ^= g;
    return rank;
}

void Constellation::unmap(int index, std::uint8_t* bits) const {
    int gray = index ^ (index >> 1);
    for (int i = 0; i < bits_per_symbol; i++)
        bits[i] = static_cast<std::uint8_t>((gray >> (bits_per_symbol - 1 - i)) & 1);
}

int Constellation::slice(cplx v) const {
    int best = 0;
    double bd = std::norm(v - points[0]);
    for (int i = 1; i < size(); i++) {
        double d = std::norm(v - points[i]);
        if (d < bd) { bd = d; best = i; }
    }
    return best;
}

DDFrame unstack(const std::vector<cplx>& v, int M, int N) {
    if (static_cast<int>(v.size()) != M * N) throw std::invalid_argument("unstack: size mismatch");
    DDFrame f(M, N);
    f.data = v;
    return f;
}

double SampledWaveform::energy() const {
    double e = 0.0;
    for (const cplx& s : samples) e += std::norm(s);
    return e / rate;
}

// ---------------------------------------------------------------------------
// splitmix64-based stream derivation: hash (master, fnv1a(purpose), index)
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master, const std::string& purpose, std::uint64_t index) {
    std::uint64_t x = master;
    std::uint64_t a = splitmix64(x);
    x ^= fnv1a(purpose);
    std::uint64_t b = splitmix64(x);
    x ^= index * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL;
    std::uint64_t c = splitmix64(x);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL) ^ (c << 1);
    if (state_ == 0) state_ = 0x4d595df4d0f33173ULL;
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do { u1 = uniform(); } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

cplx RngStream::cgaussian() {
    double u1, u2;
    do { u1 = uniform(); } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-std::log(u1));   // variance 1/2 per component
    return cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    // rejection sampling, unbiased
    std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do { v = next_u64(); } while (v >= lim);
    return v % n;
}

DDFrame map_bits(const std::vector<std::uint8_t>& bits, const Constellation& c, int M, int N) {
    const size_t need = static_cast<size_t>(M) * N * c.bits_per_symbol;
    if (bits.size() != need)
        throw std::invalid_argument("map_bits: expected " + std::to_string(need) + " bits, got " +
                                    std::to_string(bits.size()));
    DDFrame f(M, N);
    for (int i = 0; i < M * N; i++)
        f.data[i] = c.points[c.map_bits(&bits[static_cast<size_t>(i) * c.bits_per_symbol])];
    return f;
}

std::vector<std::uint8_t> demap_frame(const DDFrame& f, const Constellation& c) {
    std::vector<std::uint8_t> bits(f.data.size() * c.bits_per_symbol);
    for (size_t i = 0; i < f.data.size(); i++)
        c.unmap(c.slice(f.data[i]), &bits[i * c.bits_per_symbol]);
    return bits;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        lineno++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace oddm
