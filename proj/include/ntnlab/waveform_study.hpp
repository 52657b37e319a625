#pragma once

#include <cstdint>
#include <vector>

#include "ntnlab/fofdm.hpp"
#include "ntnlab/ofdm.hpp"
#include "ntnlab/spectrum.hpp"
#include "ntnlab/twta.hpp"

namespace ntnlab::wave {

// CP-OFDM vs f-OFDM comparison through the amplifier. Linear-channel
// spectra are measured at the critically sampled rate (like the classic
// periodogram figures); the nonlinear chain runs 4x oversampled so
// spectral regrowth lands inside the measured band instead of aliasing.
// PAPR is measured per symbol on isolated bursts, where the filter's edge
// transients live.
struct StudyConfig {
    OfdmConfig ofdm;            // base design; n_symbols/oversample overridden
    FilterSpec filter;          // defaults derived from ofdm when length==0
    TwtaModel twta;
    std::size_t psd_symbols = 2048;
    std::size_t papr_symbols = 10000;
    int twta_oversample = 4;
    std::uint64_t seed = 0;
    WelchConfig welch;
    std::size_t batch_symbols = 256;  // streaming granularity

    StudyConfig() { filter = FilterSpec::for_config(ofdm); }
};

struct StudyResult {
    SpectrumEstimate ofdm_linear;
    SpectrumEstimate fofdm_linear;
    SpectrumEstimate ofdm_twta;
    SpectrumEstimate fofdm_twta;
    std::vector<double> papr_ofdm_db;   // per-symbol population
    std::vector<double> papr_fofdm_db;
    double papr_ofdm_1e3_db = 0.0;      // CCDF 1e-3 points
    double papr_fofdm_1e3_db = 0.0;

    double oobe_gap_linear_db() const {
        return fofdm_linear.oobe_suppression_db - ofdm_linear.oobe_suppression_db;
    }
    double oobe_gap_twta_db() const {
        return fofdm_twta.oobe_suppression_db - ofdm_twta.oobe_suppression_db;
    }
};

StudyResult run_waveform_study(const StudyConfig& config);

// Streaming Welch accumulator: batches contribute full segments only, and
// partial sums are reduced in a fixed order so results are reproducible.
class WelchAccumulator {
public:
    explicit WelchAccumulator(const WelchConfig& cfg) : cfg_(cfg) {}
    void add(std::span<const cplx> samples);
    // Average periodogram, fftshifted; throws when nothing was added.
    std::vector<double> psd() const;
    std::size_t segments() const { return count_; }

private:
    WelchConfig cfg_;
    std::vector<double> acc_;
    std::size_t count_ = 0;
};

}  // namespace ntnlab::wave
