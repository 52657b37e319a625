#include "ntnlab/nprach.hpp"

#include <random>
#include <stdexcept>

namespace ntnlab::sim {

void NprachPreamble::validate() const {
    if (repetitions < 1 || repetitions > 128) {
        throw std::invalid_argument("NPRACH repetitions must be in 1..128");
    }
}

std::vector<NprachHop> nprach_schedule(const NprachPreamble& preamble,
                                       std::uint64_t seed) {
    preamble.validate();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> tone(0, NprachPreamble::hop_subcarriers - 1);

    std::vector<NprachHop> out;
    out.reserve(static_cast<std::size_t>(preamble.repetitions) *
                NprachPreamble::symbol_groups);

    std::vector<int> prev_pattern;
    double t = 0.0;
    for (int rep = 0; rep < preamble.repetitions; ++rep) {
        std::vector<int> pattern(NprachPreamble::symbol_groups);
        do {
            for (int& idx : pattern) {
                idx = tone(rng);
            }
        } while (pattern == prev_pattern);  // hopping differs per repetition

        for (int g = 0; g < NprachPreamble::symbol_groups; ++g) {
            out.push_back(NprachHop{t, pattern[g]});
            t += preamble.group_duration_s();
        }
        prev_pattern = std::move(pattern);
    }
    return out;
}

}  // namespace ntnlab::sim
