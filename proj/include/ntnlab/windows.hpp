#pragma once

#include <cstddef>
#include <vector>

namespace ntnlab::wave {

// Zeroth-order modified Bessel function of the first kind (series form).
double bessel_i0(double x);

// Kaiser window; beta around 18 keeps sidelobes near -170 dB, enough to
// observe a 150 dB out-of-band floor.
std::vector<double> kaiser_window(std::size_t n, double beta);

// Flat centre with raised-cosine tapers over `taper_fraction` of the
// length at each end (Tukey window).
std::vector<double> tukey_window(std::size_t n, double taper_fraction);

// Full-length raised cosine lifted to a power; exponents below one relax
// the taper (0.6 is the usual choice for soft-truncated sinc filters).
std::vector<double> raised_cosine_pow_window(std::size_t n, double exponent);

}  // namespace ntnlab::wave
