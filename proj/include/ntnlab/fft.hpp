#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ntnlab::wave {

using cplx = std::complex<double>;

// Iterative radix-2 FFT for power-of-two sizes, with precomputed twiddle
// and bit-reversal tables. Methods are const and keep no mutable state, so
// one plan can serve many threads.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    // In-place, unscaled.
    void forward(std::span<cplx> data) const;
    // In-place, scaled by 1/n (forward followed by inverse is identity).
    void inverse(std::span<cplx> data) const;

private:
    void transform(std::span<cplx> data, bool invert) const;

    std::size_t n_ = 0;
    std::vector<cplx> twiddle_;        // e^{-2pi i k / n}, k < n/2
    std::vector<std::uint32_t> rev_;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Rotates a spectrum so bin 0 lands in the middle (negative frequencies
// first), matching the exported frequency axes.
template <typename T>
std::vector<T> fft_shift(const std::vector<T>& v) {
    std::vector<T> out(v.size());
    const std::size_t half = v.size() / 2;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[(i + half) % v.size()];
    }
    return out;
}

}  // namespace ntnlab::wave
