#pragma once

#include "oddm/core.hpp"

namespace oddm {

inline bool is_pow2(size_t n) { return n && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse. No scaling.
void fft_pow2(std::vector<cplx>& x, int sign);

// Unnormalized DFT, any length: X[k] = sum_j x[j] e^{sign * j2pi jk/n}.
// Dispatches to the radix-2 path for power-of-two sizes.
std::vector<cplx> dft(const std::vector<cplx>& x, int sign);

}  // namespace oddm
