#include "ntnlab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace ntnlab::wave {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Fft size must be a power of two");
    }
    twiddle_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = step * static_cast<double>(k);
        twiddle_[k] = cplx(std::cos(a), std::sin(a));
    }
    rev_.resize(n);
    std::uint32_t bits = 0;
    while ((1u << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (std::uint32_t b = 0; b < bits; ++b) {
            r |= ((i >> b) & 1u) << (bits - 1 - b);
        }
        rev_[i] = r;
    }
}

void Fft::transform(std::span<cplx> data, bool invert) const {
    if (data.size() != n_) {
        throw std::invalid_argument("Fft buffer size mismatch");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = rev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = twiddle_[k * stride];
                if (invert) w = std::conj(w);
                const cplx odd = data[start + k + half] * w;
                const cplx even = data[start + k];
                data[start + k] = even + odd;
                data[start + k + half] = even - odd;
            }
        }
    }
    if (invert) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& v : data) v *= scale;
    }
}

void Fft::forward(std::span<cplx> data) const { transform(data, false); }
void Fft::inverse(std::span<cplx> data) const { transform(data, true); }

}  // namespace ntnlab::wave
