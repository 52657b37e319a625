#pragma once

#include <span>
#include <vector>

#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::wave {

// Averaged modified periodogram. The Kaiser taper's sidelobes sit around
// -170 dB so a 150 dB out-of-band floor stays visible.
struct WelchConfig {
    std::size_t segment = 4096;
    double overlap = 0.5;
    double kaiser_beta = 18.0;
};

// Power spectral density over fftshifted bins (-0.5..0.5 cycles/sample),
// normalized by the window energy. Segments are processed independently
// and summed in index order, so the result does not depend on the thread
// count. welch_psd_serial is the straightforward single-pass reference.
std::vector<double> welch_psd(std::span<const std::complex<double>> x,
                              const WelchConfig& cfg = {});
std::vector<double> welch_psd_serial(std::span<const std::complex<double>> x,
                                     const WelchConfig& cfg = {});

struct SpectrumEstimate {
    std::vector<double> freq;    // cycles/sample at the buffer's rate
    std::vector<double> psd_db;
    // Declared measurement regions (absolute |f|, same units as freq).
    double inband_lo = 0.0, inband_hi = 0.0;
    double oob_lo = 0.0, oob_hi = 0.0;
    double inband_mean_db = 0.0;
    double oob_mean_db = 0.0;
    double oobe_suppression_db = 0.0;  // in-band mean minus out-of-band mean
};

// PSD plus the out-of-band emission figure. The in-band region is the
// central 80% of the occupied band; the out-of-band region spans 1.2 to
// 2.0 times the occupied half-bandwidth, clipped to Nyquist. Requires the
// buffer to carry its occupied band and at least 8 segments of samples.
SpectrumEstimate estimate_psd(const IqBuffer& buffer,
                              const WelchConfig& cfg = {});

// Region bookkeeping over an already-averaged (fftshifted) PSD vector.
SpectrumEstimate summarize_psd(const std::vector<double>& psd,
                               double occupied_half_bw);

}  // namespace ntnlab::wave
