#pragma once

#include <cstdint>
#include <vector>

namespace ntnlab::sim {

enum class NprachFormat { F0, F1 };  // cyclic prefix 66.7 us vs 266.7 us

// NB-IoT random access preamble: 4 symbol groups per repetition, each group
// one CP plus 5 symbols of 1/3.75kHz, hopping over 12 contiguous 3.75 kHz
// tones with a different pattern per repetition.
struct NprachPreamble {
    NprachFormat format = NprachFormat::F0;
    int repetitions = 1;  // <= 128

    static constexpr int symbol_groups = 4;
    static constexpr int symbols_per_group = 5;
    static constexpr int hop_subcarriers = 12;
    static constexpr double symbol_duration_s = 1.0 / 3750.0;  // 266.67 us
    static constexpr double sequence_duration_s = symbols_per_group * symbol_duration_s;

    double cp_duration_s() const {
        // 2048 / 8192 of a symbol for format 0, one full symbol for format 1.
        return format == NprachFormat::F0 ? symbol_duration_s / 4.0
                                          : symbol_duration_s;
    }
    double group_duration_s() const { return cp_duration_s() + sequence_duration_s; }
    double total_duration_s() const {
        return static_cast<double>(repetitions) * symbol_groups * group_duration_s();
    }

    void validate() const;
};

struct NprachHop {
    double start_time_s = 0.0;
    int subcarrier_index = 0;  // 0..11
};

// Transmission schedule: one entry per symbol group per repetition, with a
// seeded pseudo-random tone index per group. Consecutive repetitions are
// guaranteed distinct hopping patterns (the 3GPP hopping polynomial itself
// is out of scope; only its constraints are modelled).
std::vector<NprachHop> nprach_schedule(const NprachPreamble& preamble,
                                       std::uint64_t seed);

}  // namespace ntnlab::sim
