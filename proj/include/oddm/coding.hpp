#pragma once

#include "oddm/core.hpp"

namespace oddm {

/**
 * Rate-2/3 convolutional code, constraint length 5, generators
 * [23 35 0; 0 5 13] octal (row = input stream, column = output stream,
 * MSB-first taps).  Input bits de-serialize alternately into the two
 * streams; encoding appends a zero tail driving both registers to zero.
 */
class ConvCode {
  public:
    static constexpr int kConstraint = 5;
    static constexpr int kTailPairs = kConstraint - 1;

    // |bits| must be even.  Output: 3 * (|bits|/2 + 4) bits.
    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& bits) const;

    // Soft input: llr[i] = log P(bit_i = 0) - log P(bit_i = 1), length divisible
    // by 3 and covering the tail; returns the information bits (tail stripped).
    std::vector<std::uint8_t> decode(const std::vector<double>& llrs) const;
    // Hard input convenience (bits mapped to large-magnitude LLRs).
    std::vector<std::uint8_t> decode_hard(const std::vector<std::uint8_t>& coded) const;

    // Trellis step: output 3 bits for (state, input pair); used by tests to
    // check decoder/encoder consistency.
    static int step_output(int state, int in_pair);   // 3-bit packed, MSB = stream 0's output
    static int step_next(int state, int in_pair);
    static constexpr int kStates = 1 << (2 * (kConstraint - 1));
};

// Seed-derived uniform random bit interleaver (Fisher-Yates).
std::vector<int> make_interleaver(int n, std::uint64_t seed);
std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& bits, const std::vector<int>& perm);
std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t>& bits, const std::vector<int>& perm);
std::vector<double> deinterleave(const std::vector<double>& llrs, const std::vector<int>& perm);

// Per-bit LLRs from symbol posteriors (row-major [symbol][point], Gray
// labelling of `c`), max-log marginalization, clipped to +-50.
std::vector<double> soft_llrs(const std::vector<double>& posteriors, const Constellation& c);

}  // namespace oddm
