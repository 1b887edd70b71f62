#include "oddm/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oddm {

namespace {

// 5-bit tap masks, MSB = current bit: octal 23,35,0 / 0,5,13
constexpr int kTaps0[3] = {023, 035, 0};
constexpr int kTaps1[3] = {0, 05, 013};

inline int parity5(int v) {
    v ^= v >> 4;
    v ^= v >> 2;
    v ^= v >> 1;
    return v & 1;
}

}  // namespace

int ConvCode::step_output(int state, int in_pair) {
    const int s0 = (state >> 4) & 0xF;
    const int s1 = state & 0xF;
    const int b0 = (in_pair >> 1) & 1;
    const int b1 = in_pair & 1;
    const int w0 = (b0 << 4) | s0;   // [current, z^-1..z^-4]
    const int w1 = (b1 << 4) | s1;
    int out = 0;
    for (int j = 0; j < 3; j++) {
        const int bit = parity5(kTaps0[j] & w0) ^ parity5(kTaps1[j] & w1);
        out = (out << 1) | bit;
    }
    return out;
}

int ConvCode::step_next(int state, int in_pair) {
    const int s0 = (state >> 4) & 0xF;
    const int s1 = state & 0xF;
    const int b0 = (in_pair >> 1) & 1;
    const int b1 = in_pair & 1;
    const int n0 = ((s0 >> 1) | (b0 << 3)) & 0xF;
    const int n1 = ((s1 >> 1) | (b1 << 3)) & 0xF;
    return (n0 << 4) | n1;
}

std::vector<std::uint8_t> ConvCode::encode(const std::vector<std::uint8_t>& bits) const {
    if (bits.size() % 2 != 0) throw std::invalid_argument("conv_encode: odd number of input bits");
    const size_t pairs = bits.size() / 2;
    std::vector<std::uint8_t> out;
    out.reserve(3 * (pairs + kTailPairs));
    int state = 0;
    for (size_t i = 0; i < pairs + kTailPairs; i++) {
        const int b0 = i < pairs ? (bits[2 * i] & 1) : 0;
        const int b1 = i < pairs ? (bits[2 * i + 1] & 1) : 0;
        const int in = (b0 << 1) | b1;
        const int o = step_output(state, in);
        out.push_back(static_cast<std::uint8_t>((o >> 2) & 1));
        out.push_back(static_cast<std::uint8_t>((o >> 1) & 1));
        out.push_back(static_cast<std::uint8_t>(o & 1));
        state = step_next(state, in);
    }
    return out;
}

std::vector<std::uint8_t> ConvCode::decode(const std::vector<double>& llrs) const {
    if (llrs.size() % 3 != 0) throw std::invalid_argument("viterbi: LLR length not a multiple of 3");
    const int steps = static_cast<int>(llrs.size() / 3);
    if (steps <= kTailPairs) throw std::invalid_argument("viterbi: too short for the tail");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> metric(kStates, kInf), next(kStates, kInf);
    metric[0] = 0.0;
    // survivor: predecessor state | (input << 8)
    std::vector<std::uint16_t> surv(static_cast<size_t>(steps) * kStates);

    for (int t = 0; t < steps; t++) {
        // bit cost: choosing bit 1 costs llr (llr = logP0 - logP1)
        const double c[3] = {llrs[3 * t], llrs[3 * t + 1], llrs[3 * t + 2]};
        std::fill(next.begin(), next.end(), kInf);
        const int max_in = (t < steps - kTailPairs) ? 4 : 1;   // tail forces zeros
        for (int s = 0; s < kStates; s++) {
            if (metric[s] == kInf) continue;
            for (int in = 0; in < max_in; in++) {
                const int o = step_output(s, in);
                double bm = 0.0;
                if (o & 4) bm += c[0];
                if (o & 2) bm += c[1];
                if (o & 1) bm += c[2];
                const int ns = step_next(s, in);
                const double m = metric[s] + bm;
                if (m < next[ns]) {
                    next[ns] = m;
                    surv[static_cast<size_t>(t) * kStates + ns] =
                        static_cast<std::uint16_t>(s | (in << 8));
                }
            }
        }
        metric.swap(next);
    }

    // zero-terminated: trace back from state 0
    std::vector<std::uint8_t> bits(2 * static_cast<size_t>(steps - kTailPairs));
    int s = 0;
    for (int t = steps - 1; t >= 0; t--) {
        const std::uint16_t e = surv[static_cast<size_t>(t) * kStates + s];
        const int in = (e >> 8) & 3;
        if (t < steps - kTailPairs) {
            bits[2 * t] = static_cast<std::uint8_t>((in >> 1) & 1);
            bits[2 * t + 1] = static_cast<std::uint8_t>(in & 1);
        }
        s = e & 0xFF;
    }
    return bits;
}

std::vector<std::uint8_t> ConvCode::decode_hard(const std::vector<std::uint8_t>& coded) const {
    std::vector<double> llrs(coded.size());
    for (size_t i = 0; i < coded.size(); i++) llrs[i] = coded[i] ? -1.0 : 1.0;
    return decode(llrs);
}

std::vector<int> make_interleaver(int n, std::uint64_t seed) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; i++) perm[i] = i;
    RngStream rng(seed, "coding.interleaver", 0);
    for (int i = n - 1; i > 0; i--) {
        const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& bits, const std::vector<int>& perm) {
    if (bits.size() != perm.size()) throw std::invalid_argument("interleave: size mismatch");
    std::vector<std::uint8_t> out(bits.size());
    for (size_t i = 0; i < bits.size(); i++) out[perm[i]] = bits[i];
    return out;
}

std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t>& bits, const std::vector<int>& perm) {
    if (bits.size() != perm.size()) throw std::invalid_argument("deinterleave: size mismatch");
    std::vector<std::uint8_t> out(bits.size());
    for (size_t i = 0; i < bits.size(); i++) out[i] = bits[perm[i]];
    return out;
}

std::vector<double> deinterleave(const std::vector<double>& llrs, const std::vector<int>& perm) {
    if (llrs.size() != perm.size()) throw std::invalid_argument("deinterleave: size mismatch");
    std::vector<double> out(llrs.size());
    for (size_t i = 0; i < llrs.size(); i++) out[i] = llrs[perm[i]];
    return out;
}

std::vector<double> soft_llrs(const std::vector<double>& posteriors, const Constellation& c) {
    const int A = c.size();
    const int B = c.bits_per_symbol;
    if (posteriors.size() % A != 0) throw std::invalid_argument("soft_llrs: posterior size mismatch");
    const size_t nsym = posteriors.size() / A;
    constexpr double kClip = 50.0;

    std::vector<double> llrs(nsym * B);
    std::vector<std::uint8_t> label(B);
    for (size_t s = 0; s < nsym; s++) {
        const double* p = &posteriors[s * A];
        for (int b = 0; b < B; b++) {
            double m0 = -std::numeric_limits<double>::infinity();
            double m1 = m0;
            for (int a = 0; a < A; a++) {
                c.unmap(a, label.data());
                const double lp = std::log(std::max(p[a], 1e-300));
                if (label[b])
                    m1 = std::max(m1, lp);
                else
                    m0 = std::max(m0, lp);
            }
            llrs[s * B + b] = std::clamp(m0 - m1, -kClip, kClip);
        }
    }
    return llrs;
}

}  // namespace oddm
