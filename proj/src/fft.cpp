#include "oddm/fft.hpp"

#include <cmath>

namespace oddm {

void fft_pow2(std::vector<cplx>& x, int sign) {
    const size_t n = x.size();
    if (n <= 1) return;
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = x[i + j];
                cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
    const size_t n = x.size();
    if (is_pow2(n)) {
        std::vector<cplx> y = x;
        fft_pow2(y, sign);
        return y;
    }
    std::vector<cplx> y(n, 0.0);
    for (size_t k = 0; k < n; k++) {
        cplx acc = 0.0;
        for (size_t j = 0; j < n; j++) {
            const double ph = sign * 2.0 * M_PI * static_cast<double>(j * k % n) / static_cast<double>(n);
            acc += x[j] * cplx(std::cos(ph), std::sin(ph));
        }
        y[k] = acc;
    }
    return y;
}

}  // namespace oddm
