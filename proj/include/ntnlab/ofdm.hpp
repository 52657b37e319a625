#pragma once

#include <cstdint>
#include <vector>

#include "ntnlab/fft.hpp"
#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::wave {

// CP-OFDM reference design: 1024-point transform, 600 used subcarriers
// loaded with unit-power Gray-mapped 64QAM, 72-sample cyclic prefix.
// oversample > 1 evaluates the same waveform on a finer grid (transform
// and CP scale together), which is how the amplifier stage gets the
// headroom to show spectral regrowth.
struct OfdmConfig {
    std::size_t fft_size = 1024;
    std::size_t used_subcarriers = 600;
    std::size_t cp_length = 72;
    std::size_t n_symbols = 1;
    int oversample = 1;

    std::size_t ifft_size() const {
        return fft_size * static_cast<std::size_t>(oversample);
    }
    std::size_t symbol_length() const {
        return (fft_size + cp_length) * static_cast<std::size_t>(oversample);
    }
    // Nominal band edge in cycles/sample at the generated rate.
    double occupied_half_bw() const {
        return static_cast<double>(used_subcarriers) / 2.0 /
               static_cast<double>(ifft_size());
    }

    void validate() const;
};

// Gray-mapped 64QAM symbols with unit average power.
std::vector<cplx> random_qam64(std::size_t count, std::uint64_t seed);

// n_symbols CP-OFDM symbols; the inverse transform is unitary-scaled so
// time-domain power equals subcarrier power, and the payload is drawn from
// a per-symbol stream of `seed` (the same seed yields the same payload at
// any oversampling factor).
IqBuffer generate_ofdm(const OfdmConfig& config, std::uint64_t seed);

// Single-threaded reference used by the equivalence tests.
IqBuffer generate_ofdm_serial(const OfdmConfig& config, std::uint64_t seed);

}  // namespace ntnlab::wave
