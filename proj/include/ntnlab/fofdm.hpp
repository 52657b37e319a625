#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ntnlab/iq_buffer.hpp"
#include "ntnlab/ofdm.hpp"

namespace ntnlab::wave {

// Sub-band filter for f-OFDM: an ideal rectangular frequency response
// (sinc impulse response) covering the occupied band plus a small tone
// margin, truncated to `length` taps by a window with smooth transitions
// to zero, and normalized to exactly unit DC gain. `length` refers to the
// critically sampled design; applying the filter to an oversampled buffer
// realizes the same continuous-time response on the finer grid.
struct FilterSpec {
    std::size_t length = 513;
    double tone_offset = 2.5;  // transition margin in subcarriers
    // Soft full-length raised cosine keeps the outermost tones within the
    // 0.5 dB ripple budget; the flat-top taper does not.
    enum class Window { TukeyOuterEighth, SoftRaisedCosine, Kaiser } window =
        Window::SoftRaisedCosine;
    double window_param = 0.6;  // exponent (soft RC) or beta (Kaiser)

    // Band geometry of the waveform this filter is meant for.
    std::size_t fft_size = 1024;
    std::size_t used_subcarriers = 600;

    static FilterSpec for_config(const OfdmConfig& cfg) {
        FilterSpec spec;
        spec.fft_size = cfg.fft_size;
        spec.used_subcarriers = cfg.used_subcarriers;
        return spec;
    }

    // Realized taps for a buffer at `oversample` times the design rate:
    // length scales to oversample*(length-1)+1, cutoff scales down.
    std::vector<double> taps(int oversample = 1) const;

    void validate() const;
};

// Frequency response of a real tap set at normalized frequency nu
// (cycles/sample), evaluated directly from the definition.
std::complex<double> tap_response(std::span<const double> taps, double nu);

// Linear convolution of x with real taps; output length x.size()+taps-1.
// Overlap-save FFT blocks, parallel across blocks with disjoint writes, so
// results are identical for any thread count.
std::vector<cplx> fir_filter(std::span<const cplx> x,
                             std::span<const double> taps);

// Direct-form reference used as the independent oracle in tests.
std::vector<cplx> fir_filter_direct(std::span<const cplx> x,
                                    std::span<const double> taps);

// Filters the buffer with the filter design realized at the buffer's
// rate. Throws
// std::invalid_argument when the buffer's occupied band does not match the
// filter design.
IqBuffer apply_fofdm(const IqBuffer& buffer, const FilterSpec& spec);

}  // namespace ntnlab::wave
