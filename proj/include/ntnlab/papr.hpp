#pragma once

#include <span>
#include <vector>

#include "ntnlab/iq_buffer.hpp"

namespace ntnlab::wave {

// Peak-to-average power ratio exceeded with the given probability. Buffers
// that carry a symbol grid are measured per symbol (peak over each symbol
// against the buffer-wide average); otherwise the instantaneous
// sample-power CCDF is used. Requires at least 100/probability samples.
double papr_ccdf(const IqBuffer& buffer, double probability);

// CCDF helper over a population of per-unit PAPR values (dB): the value
// exceeded by at most `probability` of the population.
double ccdf_value_db(std::vector<double> papr_db, double probability);

// Per-symbol PAPR (dB) of a buffer with a symbol grid, normalized by the
// buffer-wide mean power.
std::vector<double> per_symbol_papr_db(const IqBuffer& buffer);

// (papr_db, ccdf) curve over the population, decimated to at most
// max_points rows, for CSV export.
std::vector<std::pair<double, double>> papr_ccdf_curve(
    std::vector<double> papr_db, std::size_t max_points = 512);

}  // namespace ntnlab::wave
