#include "ntnlab/fofdm.hpp"

#include <cmath>
#include <stdexcept>

#include "ntnlab/fft.hpp"
#include "ntnlab/windows.hpp"

namespace ntnlab::wave {

void FilterSpec::validate() const {
    if (length < 3 || length % 2 == 0) {
        throw std::invalid_argument("filter length must be odd and >= 3");
    }
    if (tone_offset < 0.0) {
        throw std::invalid_argument("filter tone_offset must be >= 0");
    }
    if (used_subcarriers == 0 || used_subcarriers >= fft_size) {
        throw std::invalid_argument("filter band does not fit the transform");
    }
}

std::vector<double> FilterSpec::taps(int oversample) const {
    validate();
    if (oversample < 1) {
        throw std::invalid_argument("oversample must be >= 1");
    }
    const std::size_t n = static_cast<std::size_t>(oversample) * (length - 1) + 1;
    // Two-sided cutoff: half the occupied band plus the tone margin.
    const double cutoff = (static_cast<double>(used_subcarriers) / 2.0 + tone_offset) /
                          static_cast<double>(fft_size) /
                          static_cast<double>(oversample);

    std::vector<double> w;
    switch (window) {
        case Window::TukeyOuterEighth: w = tukey_window(n, 1.0 / 8.0); break;
        case Window::SoftRaisedCosine: w = raised_cosine_pow_window(n, window_param); break;
        case Window::Kaiser: w = kaiser_window(n, window_param); break;
    }

    std::vector<double> h(n);
    const double mid = static_cast<double>(n - 1) / 2.0;
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i <= half; ++i) {
        const double t = static_cast<double>(i) - mid;
        const double x = 2.0 * cutoff * t;
        const double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
        const double v = 2.0 * cutoff * sinc * w[i];
        h[i] = v;
        h[n - 1 - i] = v;  // symmetric by construction (linear phase)
    }
    double sum = 0.0;
    for (double v : h) sum += v;
    for (double& v : h) v /= sum;  // unit DC gain
    return h;
}

std::complex<double> tap_response(std::span<const double> taps, double nu) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        const double a = -2.0 * M_PI * nu * static_cast<double>(i);
        acc += taps[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    return acc;
}

std::vector<cplx> fir_filter_direct(std::span<const cplx> x,
                                    std::span<const double> taps) {
    if (taps.empty()) {
        throw std::invalid_argument("fir_filter: empty taps");
    }
    std::vector<cplx> y(x.size() + taps.size() - 1, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < y.size(); ++n) {
        cplx acc(0.0, 0.0);
        const std::size_t k_lo = n >= x.size() ? n - x.size() + 1 : 0;
        const std::size_t k_hi = std::min(taps.size() - 1, n);
        for (std::size_t k = k_lo; k <= k_hi; ++k) {
            acc += taps[k] * x[n - k];
        }
        y[n] = acc;
    }
    return y;
}

std::vector<cplx> fir_filter(std::span<const cplx> x,
                             std::span<const double> taps) {
    if (taps.empty()) {
        throw std::invalid_argument("fir_filter: empty taps");
    }
    const std::size_t l = taps.size();
    const std::size_t out_len = x.size() + l - 1;
    // Tiny workloads are cheaper in direct form than planning transforms.
    if (l < 8 || static_cast<double>(x.size()) * static_cast<double>(l) < 1e5) {
        return fir_filter_direct(x, taps);
    }

    const std::size_t fft_len =
        std::max<std::size_t>(4096, next_power_of_two(4 * l));
    const std::size_t step = fft_len - (l - 1);
    const Fft fft(fft_len);

    std::vector<cplx> taps_f(fft_len, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < l; ++i) taps_f[i] = taps[i];
    fft.forward(taps_f);

    std::vector<cplx> y(out_len, cplx(0.0, 0.0));
    const std::size_t n_blocks = (out_len + step - 1) / step;

#pragma omp parallel
    {
        std::vector<cplx> work(fft_len);
#pragma omp for schedule(static)
        for (long long bi = 0; bi < static_cast<long long>(n_blocks); ++bi) {
            const std::size_t out_start = static_cast<std::size_t>(bi) * step;
            // Overlap-save: the block spans [out_start - (l-1), +fft_len).
            const long long in_start =
                static_cast<long long>(out_start) - static_cast<long long>(l - 1);
            for (std::size_t i = 0; i < fft_len; ++i) {
                const long long idx = in_start + static_cast<long long>(i);
                work[i] = (idx >= 0 && idx < static_cast<long long>(x.size()))
                              ? x[static_cast<std::size_t>(idx)]
                              : cplx(0.0, 0.0);
            }
            fft.forward(work);
            for (std::size_t i = 0; i < fft_len; ++i) work[i] *= taps_f[i];
            fft.inverse(work);
            const std::size_t n_out = std::min(step, out_len - out_start);
            for (std::size_t i = 0; i < n_out; ++i) {
                y[out_start + i] = work[l - 1 + i];
            }
        }
    }
    return y;
}

IqBuffer apply_fofdm(const IqBuffer& buffer, const FilterSpec& spec) {
    spec.validate();
    const double design_half_bw = static_cast<double>(spec.used_subcarriers) /
                                  2.0 / static_cast<double>(spec.fft_size);
    const double buffer_half_bw = buffer.occupied_half_bw * buffer.sample_rate;
    if (std::abs(buffer_half_bw - design_half_bw) > 1e-9) {
        throw std::invalid_argument(
            "apply_fofdm: filter band does not match the buffer's band");
    }
    const int oversample = static_cast<int>(std::lround(buffer.sample_rate));
    IqBuffer out;
    out.samples = fir_filter(buffer.samples, spec.taps(oversample));
    out.sample_rate = buffer.sample_rate;
    out.occupied_half_bw = buffer.occupied_half_bw;
    out.symbol_length = 0;  // tails break the symbol grid
    out.stages = buffer.stages;
    out.stages.push_back("fofdm");
    return out;
}

}  // namespace ntnlab::wave
