#pragma once

#include "oddm/core.hpp"

namespace oddm {

struct PsdEstimate {
    std::vector<double> freq_hz;   // fftshifted, ascending
    std::vector<double> psd;       // linear power spectral density
    int segments = 0;

    // mean linear PSD over a small band centered at +-f (both sides)
    double level_at(double f_abs, double halfwidth_hz) const;
    double inband_median(double f_edge) const;
    double peak() const;
};

// Welch periodogram: Hann window, 50% overlap.  Throws if x is shorter than
// one segment.
PsdEstimate welch_psd(const std::vector<cplx>& x, int segment, double sample_rate);

}  // namespace oddm
