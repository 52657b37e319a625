#include "ntnlab/windows.hpp"

#include <cmath>
#include <stdexcept>

namespace ntnlab::wave {

double bessel_i0(double x) {
    // Power series; converges quickly for the beta range used here.
    const double y = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= y / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

std::vector<double> kaiser_window(std::size_t n, double beta) {
    if (n < 2) {
        throw std::invalid_argument("window length must be >= 2");
    }
    std::vector<double> w(n);
    const double denom = bessel_i0(beta);
    const double m = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 2.0 * static_cast<double>(i) / m - 1.0;
        w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
    }
    return w;
}

std::vector<double> tukey_window(std::size_t n, double taper_fraction) {
    if (n < 2) {
        throw std::invalid_argument("window length must be >= 2");
    }
    if (taper_fraction < 0.0 || taper_fraction > 0.5) {
        throw std::invalid_argument("taper_fraction must be in [0, 0.5]");
    }
    std::vector<double> w(n, 1.0);
    const auto taper =
        static_cast<std::size_t>(taper_fraction * static_cast<double>(n - 1));
    for (std::size_t i = 0; i < taper; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(taper);
        const double v = 0.5 * (1.0 - std::cos(M_PI * x));
        w[i] = v;
        w[n - 1 - i] = v;
    }
    return w;
}

std::vector<double> raised_cosine_pow_window(std::size_t n, double exponent) {
    if (n < 2) {
        throw std::invalid_argument("window length must be >= 2");
    }
    std::vector<double> w(n);
    const double m = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double c =
            0.5 * (1.0 + std::cos(2.0 * M_PI * (static_cast<double>(i) / m - 0.5)));
        w[i] = std::pow(c, exponent);
    }
    return w;
}

}  // namespace ntnlab::wave
