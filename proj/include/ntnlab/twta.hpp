#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::wave {

// Memoryless travelling-wave tube amplifier: Saleh AM/AM and AM/PM curves
// by default (phase in radians), overridable with a measured table. The
// small-signal region is linear within 0.1% below -30 dB of saturation.
struct TwtaModel {
    double alpha_a = 2.1587;
    double beta_a = 1.1517;
    double alpha_phi = 4.0033;
    double beta_phi = 9.1040;
    double ibo_db = 20.0;  // input back-off from saturation

    struct TablePoint {
        double input_amplitude;
        double output_amplitude;
        double phase_shift_rad;
    };
    // Sorted by input_amplitude; linear interpolation between points.
    std::optional<std::vector<TablePoint>> table;

    // Input amplitude at which the AM/AM curve peaks.
    double input_saturation() const;
    // Peak output amplitude alpha_a / (2 sqrt(beta_a)) for the Saleh form.
    double output_saturation() const;

    double am_am(double r) const;
    double am_pm_rad(double r) const;
    std::complex<double> distort(std::complex<double> x) const;

    void validate() const;
};

// Scales the buffer so its average power sits ibo_db below the input
// saturation power, then applies the AM/AM and AM/PM curves per sample.
IqBuffer apply_twta(const IqBuffer& buffer, const TwtaModel& model);

// Loop without the parallel pragma; results must match bit for bit.
IqBuffer apply_twta_serial(const IqBuffer& buffer, const TwtaModel& model);

}  // namespace ntnlab::wave
