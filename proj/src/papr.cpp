#include "ntnlab/papr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntnlab::wave {

std::vector<double> per_symbol_papr_db(const IqBuffer& buffer) {
    if (buffer.symbol_length == 0 ||
        buffer.samples.size() % buffer.symbol_length != 0) {
        throw std::invalid_argument("buffer does not carry a whole symbol grid");
    }
    const double mean = buffer.power();
    if (!(mean > 0.0)) {
        throw std::invalid_argument("buffer has no power");
    }
    const std::size_t n_sym = buffer.samples.size() / buffer.symbol_length;
    std::vector<double> out(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) {
        double peak = 0.0;
        const std::size_t base = s * buffer.symbol_length;
        for (std::size_t i = 0; i < buffer.symbol_length; ++i) {
            peak = std::max(peak, std::norm(buffer.samples[base + i]));
        }
        out[s] = 10.0 * std::log10(peak / mean);
    }
    return out;
}

double ccdf_value_db(std::vector<double> papr_db, double probability) {
    if (papr_db.empty()) {
        throw std::invalid_argument("empty PAPR population");
    }
    if (!(probability > 0.0) || probability >= 1.0) {
        throw std::invalid_argument("probability must be in (0, 1)");
    }
    // k-th largest value with k = floor(p * n): at most a fraction p of the
    // population exceeds it.
    const auto n = papr_db.size();
    auto k = static_cast<std::size_t>(probability * static_cast<double>(n));
    k = std::min(std::max<std::size_t>(k, 1), n) - 1;  // 0-based from the top
    std::nth_element(papr_db.begin(), papr_db.begin() + static_cast<long>(k),
                     papr_db.end(), std::greater<>());
    return papr_db[k];
}

double papr_ccdf(const IqBuffer& buffer, double probability) {
    if (!(probability > 0.0) || probability >= 1.0) {
        throw std::invalid_argument("probability must be in (0, 1)");
    }
    const double need = 100.0 / probability;
    if (static_cast<double>(buffer.samples.size()) < need) {
        throw std::invalid_argument("not enough samples for the target probability");
    }
    if (buffer.symbol_length != 0 &&
        buffer.samples.size() % buffer.symbol_length == 0) {
        return ccdf_value_db(per_symbol_papr_db(buffer), probability);
    }
    const double mean = buffer.power();
    if (!(mean > 0.0)) {
        throw std::invalid_argument("buffer has no power");
    }
    std::vector<double> ratios(buffer.samples.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        ratios[i] = 10.0 * std::log10(
                        std::max(std::norm(buffer.samples[i]) / mean, 1e-300));
    }
    return ccdf_value_db(std::move(ratios), probability);
}

std::vector<std::pair<double, double>> papr_ccdf_curve(
    std::vector<double> papr_db, std::size_t max_points) {
    if (papr_db.empty()) {
        throw std::invalid_argument("empty PAPR population");
    }
    std::sort(papr_db.begin(), papr_db.end());
    const auto n = papr_db.size();
    std::vector<std::pair<double, double>> out;
    const std::size_t stride = std::max<std::size_t>(1, n / max_points);
    for (std::size_t i = 0; i < n; i += stride) {
        // Fraction of the population strictly above this value.
        const double ccdf =
            static_cast<double>(n - 1 - i) / static_cast<double>(n);
        out.emplace_back(papr_db[i], ccdf);
    }
    return out;
}

}  // namespace ntnlab::wave
