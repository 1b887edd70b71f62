#include "oddm/psd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oddm/fft.hpp"

namespace oddm {

PsdEstimate welch_psd(const std::vector<cplx>& x, int segment, double sample_rate) {
    if (segment <= 0 || !is_pow2(static_cast<size_t>(segment)))
        throw std::invalid_argument("welch_psd: segment must be a positive power of two");
    if (static_cast<int>(x.size()) < segment)
        throw std::invalid_argument("welch_psd: insufficient samples for one segment");

    std::vector<double> win(segment);
    double wss = 0.0;
    for (int i = 0; i < segment; i++) {
        win[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (segment - 1)));
        wss += win[i] * win[i];
    }

    std::vector<double> acc(segment, 0.0);
    std::vector<cplx> buf(segment);
    int nseg = 0;
    const int step = segment / 2;
    for (size_t off = 0; off + segment <= x.size(); off += step) {
        for (int i = 0; i < segment; i++) buf[i] = x[off + i] * win[i];
        fft_pow2(buf, -1);
        for (int i = 0; i < segment; i++) acc[i] += std::norm(buf[i]);
        nseg++;
    }

    PsdEstimate r;
    r.segments = nseg;
    r.freq_hz.resize(segment);
    r.psd.resize(segment);
    const double scale = 1.0 / (nseg * wss * sample_rate);
    for (int i = 0; i < segment; i++) {
        const int k = (i + segment / 2) % segment;   // fftshift
        const double f = (i - segment / 2) * sample_rate / segment;
        r.freq_hz[i] = f;
        r.psd[i] = acc[k] * scale;
    }
    return r;
}

double PsdEstimate::level_at(double f_abs, double halfwidth_hz) const {
    double sum = 0.0;
    int cnt = 0;
    for (size_t i = 0; i < freq_hz.size(); i++) {
        if (std::abs(std::abs(freq_hz[i]) - f_abs) <= halfwidth_hz) {
            sum += psd[i];
            cnt++;
        }
    }
    if (cnt == 0) throw std::invalid_argument("PsdEstimate::level_at: frequency out of range");
    return sum / cnt;
}

double PsdEstimate::inband_median(double f_edge) const {
    std::vector<double> v;
    for (size_t i = 0; i < freq_hz.size(); i++)
        if (std::abs(freq_hz[i]) <= f_edge) v.push_back(psd[i]);
    if (v.empty()) throw std::invalid_argument("PsdEstimate::inband_median: empty band");
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

double PsdEstimate::peak() const {
    double p = 0.0;
    for (double v : psd) p = std::max(p, v);
    return p;
}

}  // namespace oddm
