#include "ntnlab/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "ntnlab/fft.hpp"
#include "ntnlab/windows.hpp"

namespace ntnlab::wave {

namespace {

struct SegmentPlan {
    std::size_t seg = 0;
    std::size_t step = 0;
    std::size_t count = 0;
    std::vector<double> window;
    double norm = 0.0;  // 1 / sum(w^2)
};

SegmentPlan plan_segments(std::size_t n, const WelchConfig& cfg) {
    if (!is_power_of_two(cfg.segment)) {
        throw std::invalid_argument("welch segment must be a power of two");
    }
    if (cfg.overlap < 0.0 || cfg.overlap >= 1.0) {
        throw std::invalid_argument("welch overlap must be in [0, 1)");
    }
    SegmentPlan p;
    p.seg = cfg.segment;
    p.step = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround((1.0 - cfg.overlap) * static_cast<double>(cfg.segment))));
    if (n < p.seg) {
        throw std::invalid_argument("welch: buffer shorter than one segment");
    }
    p.count = (n - p.seg) / p.step + 1;
    p.window = kaiser_window(p.seg, cfg.kaiser_beta);
    double w2 = 0.0;
    for (double w : p.window) w2 += w * w;
    p.norm = 1.0 / w2;
    return p;
}

void periodogram(const Fft& fft, const SegmentPlan& p,
                 std::span<const std::complex<double>> x, std::size_t start,
                 std::vector<cplx>& work, std::vector<double>& out) {
    for (std::size_t i = 0; i < p.seg; ++i) {
        work[i] = x[start + i] * p.window[i];
    }
    fft.forward(work);
    for (std::size_t i = 0; i < p.seg; ++i) {
        out[i] = std::norm(work[i]) * p.norm;
    }
}

}  // namespace

std::vector<double> welch_psd_serial(std::span<const std::complex<double>> x,
                                     const WelchConfig& cfg) {
    const SegmentPlan p = plan_segments(x.size(), cfg);
    const Fft fft(p.seg);
    std::vector<cplx> work(p.seg);
    std::vector<double> pg(p.seg);
    std::vector<double> acc(p.seg, 0.0);
    for (std::size_t s = 0; s < p.count; ++s) {
        periodogram(fft, p, x, s * p.step, work, pg);
        for (std::size_t i = 0; i < p.seg; ++i) acc[i] += pg[i];
    }
    const double inv = 1.0 / static_cast<double>(p.count);
    for (double& v : acc) v *= inv;
    return fft_shift(acc);
}

std::vector<double> welch_psd(std::span<const std::complex<double>> x,
                              const WelchConfig& cfg) {
    const SegmentPlan p = plan_segments(x.size(), cfg);
    const Fft fft(p.seg);
    std::vector<double> acc(p.seg, 0.0);

    // Chunks of per-segment periodograms are computed in parallel and then
    // reduced serially in segment order, keeping the floating-point sum
    // identical to the serial reference for any thread count.
    constexpr std::size_t kChunk = 64;
    std::vector<std::vector<double>> rows(kChunk);
    for (std::size_t base = 0; base < p.count; base += kChunk) {
        const std::size_t n_rows = std::min(kChunk, p.count - base);
#pragma omp parallel
        {
            std::vector<cplx> work(p.seg);
#pragma omp for schedule(static)
            for (long long r = 0; r < static_cast<long long>(n_rows); ++r) {
                auto& row = rows[static_cast<std::size_t>(r)];
                row.resize(p.seg);
                periodogram(fft, p, x,
                            (base + static_cast<std::size_t>(r)) * p.step, work,
                            row);
            }
        }
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t i = 0; i < p.seg; ++i) acc[i] += rows[r][i];
        }
    }
    const double inv = 1.0 / static_cast<double>(p.count);
    for (double& v : acc) v *= inv;
    return fft_shift(acc);
}

SpectrumEstimate estimate_psd(const IqBuffer& buffer, const WelchConfig& cfg) {
    if (buffer.samples.size() < 8 * cfg.segment) {
        throw std::invalid_argument(
            "estimate_psd: buffer must cover at least 8 segments");
    }
    if (!(buffer.occupied_half_bw > 0.0)) {
        throw std::invalid_argument(
            "estimate_psd: buffer does not declare an occupied band");
    }
    return summarize_psd(welch_psd(buffer.samples, cfg), buffer.occupied_half_bw);
}

SpectrumEstimate summarize_psd(const std::vector<double>& psd,
                               double occupied_half_bw) {
    if (!(occupied_half_bw > 0.0)) {
        throw std::invalid_argument("summarize_psd: invalid occupied band");
    }
    SpectrumEstimate est;
    const std::size_t n = psd.size();
    est.freq.resize(n);
    est.psd_db.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        est.freq[i] = (static_cast<double>(i) - static_cast<double>(n) / 2.0) /
                      static_cast<double>(n);
        est.psd_db[i] = 10.0 * std::log10(std::max(psd[i], 1e-300));
    }

    const double half_bw = occupied_half_bw;
    est.inband_lo = 0.0;
    est.inband_hi = 0.8 * half_bw;
    est.oob_lo = 1.2 * half_bw;
    est.oob_hi = std::min(2.0 * half_bw, 0.499);

    double inband_acc = 0.0, oob_acc = 0.0;
    std::size_t inband_n = 0, oob_n = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std::abs(est.freq[i]);
        if (f >= est.inband_lo && f <= est.inband_hi) {
            inband_acc += psd[i];
            ++inband_n;
        } else if (f >= est.oob_lo && f <= est.oob_hi) {
            oob_acc += psd[i];
            ++oob_n;
        }
    }
    if (inband_n == 0 || oob_n == 0) {
        throw std::invalid_argument("estimate_psd: empty measurement region");
    }
    est.inband_mean_db =
        10.0 * std::log10(inband_acc / static_cast<double>(inband_n));
    est.oob_mean_db = 10.0 * std::log10(
                          std::max(oob_acc / static_cast<double>(oob_n), 1e-300));
    est.oobe_suppression_db = est.inband_mean_db - est.oob_mean_db;
    return est;
}

}  // namespace ntnlab::wave
