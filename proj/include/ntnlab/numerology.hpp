#pragma once

#include <optional>

#include "ntnlab/constants.hpp"

namespace ntnlab {

// NR numerology arithmetic for subcarrier spacing 15 * 2^mu kHz.
struct Numerology {
    int mu = 0;  // 0..5

    static constexpr double delta_f_max_hz = 480.0e3;
    static constexpr int n_f = 4096;
    // Basic NR time unit T_C = 1 / (delta_f_max * N_f), about 0.509 ns.
    static constexpr double t_c_s = 1.0 / (delta_f_max_hz * n_f);
    static constexpr int prb_subcarriers = 12;
    // LTE / NB-IoT time unit.
    static constexpr double t_s_lte_s = 1.0 / (15000.0 * 2048.0);

    double scs_khz() const { return 15.0 * static_cast<double>(1 << mu); }
    double tti_ms() const { return 1.0 / static_cast<double>(1 << mu); }
};

inline constexpr int kMaxTaCommand = 1282;           // NR T_A range 0..1282
inline constexpr double kNbiotTaBudgetS = 0.67e-3;   // NB-IoT max advance

// Timing advance command. NR: T_TA = T_C * T_A * 16 * 64 / 2^mu, applied at
// subframe n+6. NB-IoT: T_TA = T_A * 16 * T_s, applied at the first uplink
// slot after the end of subframe n+12.
struct TaCommand {
    int value = 0;
    bool nbiot = false;

    double time_s(int mu = 0) const;
    int applied_at_subframe(int received_subframe) const {
        return nbiot ? received_subframe + 13 : received_subframe + 6;
    }
};

// NR timing advance value in seconds. Throws std::out_of_range when
// T_A is outside 0..1282 or mu outside 0..5.
double ta_time_s(int ta_command, int mu);

// Distance granularity of one TA step, c * T_TA(1) / 2, in meters.
double ta_distance_step_m(int mu, const PhysicalConstants& pc = {});

// Largest gNB-UE distance the TA range can compensate, c * T_TA(1282) / 2.
double max_compensable_distance_km(int mu, const PhysicalConstants& pc = {});

// NB-IoT timing advance T_A * 16 * T_s. Throws std::out_of_range when the
// result would exceed the 0.67 ms budget (the limit is the time budget,
// not an integer command cap).
double nbiot_ta_time_s(int ta_command);

// Largest NB-IoT command that stays within the budget.
int nbiot_max_ta_command();

// Maximum tolerable slant-range difference for a shared TA value:
// c * max_ta / 2 (round-trip accounting), in km.
double differential_delay_limit_km(double max_ta_s,
                                   const PhysicalConstants& pc = {});

struct HarqDimensioning {
    double t_owp_ms = 0.0;
    double t_proc_ms = 0.0;
    double tti_ms = 0.0;
    double t_harq_ms = 0.0;   // 2 * (t_owp + t_proc)
    int n_min = 0;            // ceil(t_harq / tti)
    int dci_bits = 0;         // ceil(log2(n_min)), 0 for a single process
    double buffer_units = 0;  // n_min * tti, soft-buffer proxy
};

// Minimum parallel stop-and-wait process count to keep the link saturated,
// plus the DCI identifier width and soft-buffer proxy that follow from it.
HarqDimensioning harq_dimension(double t_owp_ms, double t_proc_ms,
                                double tti_ms);

// Residual uplink misalignment |true_rtt - T_TA(command)|, in seconds.
double uplink_timing_residual_s(double true_rtt_ms, const TaCommand& cmd,
                                int mu);

struct BestTaCommand {
    TaCommand command;
    double residual_s = 0.0;
    bool reachable = true;  // false when true_rtt exceeds the TA budget
};

// Closest in-range NR command for a measured round trip. When the round
// trip exceeds T_TA(1282) the result is flagged unreachable (and clamped).
BestTaCommand best_ta_command(double true_rtt_ms, int mu);

}  // namespace ntnlab
