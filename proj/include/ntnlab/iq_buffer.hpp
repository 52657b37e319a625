#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ntnlab::wave {

// Complex baseband samples flowing through the OFDM / filter / TWTA stages.
// sample_rate is relative to the critically sampled OFDM rate (1.0 = one
// sample per FFT bin spacing times fft_size); occupied_half_bw is the
// nominal band edge in cycles per sample at this buffer's rate (0 when not
// applicable); symbol_length (samples, including CP) is kept when the
// buffer is a whole number of symbols.
struct IqBuffer {
    std::vector<std::complex<double>> samples;
    double sample_rate = 1.0;
    double occupied_half_bw = 0.0;
    std::size_t symbol_length = 0;
    std::vector<std::string> stages;

    std::size_t size() const { return samples.size(); }

    double power() const {
        if (samples.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& s : samples) acc += std::norm(s);
        return acc / static_cast<double>(samples.size());
    }
};

}  // namespace ntnlab::wave
