#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntnlab/constants.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::feas {

enum class Verdict { Pass, Fail };

inline const char* to_string(Verdict v) {
    return v == Verdict::Pass ? "PASS" : "FAIL";
}

struct CheckResult {
    std::string name;
    double constraint_value = 0.0;
    std::string constraint_unit;
    double scenario_value = 0.0;
    std::string value_unit;
    Verdict verdict = Verdict::Pass;
    std::string remedy;  // empty when nothing is needed
    // Present on FAIL where a numeric extension makes sense; always at
    // least the measured deficit.
    std::optional<double> suggested_extension;
};

struct FeasibilityReport {
    std::string scenario;
    Architecture architecture = Architecture::A1;
    std::vector<CheckResult> checks;
    int n_pass = 0;
    int n_fail = 0;
};

struct ReportOptions {
    double max_ue_separation_km = 200.0;
    double harq_t_proc_ms = 5.0;  // reproduces the GEO per-leg total
    double doppler_constraint_hz = 950.0;
    double cfo_raster_hz = 7.5e3;
    double nbiot_subcarrier_hz = 3.75e3;
    int harq_process_cap = 16;
    // Extra core-network turnaround on the msg3/msg4 leg (relay-node
    // architectures reach the NGC there); kept at zero by default.
    double core_delay_ms = 0.0;
};

// RAR window and contention resolution timer against the response time of
// the terminating node (per architecture); the contention leg additionally
// carries the configured core delay.
std::vector<CheckResult> check_ra_timers(const ScenarioConfig& scenario,
                                         double core_delay_ms = 0.0,
                                         const PhysicalConstants& pc = {});

// timeAlignmentTimer against the RTT, and the worst-pass slant-range
// difference at the given UE separation against the TA budget. For the
// relay-node eMBB architecture the range check passes by ad hoc deployment.
std::vector<CheckResult> check_ta(const ScenarioConfig& scenario,
                                  double max_ue_separation_km,
                                  const PhysicalConstants& pc = {});

// Minimum process count, DCI width and buffer proxy against the standard's
// process cap.
std::vector<CheckResult> check_harq(const ScenarioConfig& scenario,
                                    const ReportOptions& options = {},
                                    const PhysicalConstants& pc = {});

// Differential Doppler vs the 950 Hz constraint, common Doppler vs the
// CFO search raster, residual offsets vs the 3.75 kHz subcarrier spacing.
// GEO scenarios with fixed relay nodes report negligible Doppler.
std::vector<CheckResult> check_frequency(const ScenarioConfig& scenario,
                                         double ue_separation_km,
                                         const ReportOptions& options = {},
                                         const PhysicalConstants& pc = {});

// Residual offset after uplink pre-compensation by the negated estimate.
double frequency_advance_residual_hz(double true_offset_hz,
                                     double estimated_offset_hz);

// All applicable checks for the scenario's service type, in a fixed order.
FeasibilityReport full_report(const ScenarioConfig& scenario,
                              const ReportOptions& options = {},
                              const PhysicalConstants& pc = {});

// JSON export with stable key order:
// {scenario, architecture, checks:[{name, constraint, value, verdict,
//  remedy}], summary}
std::string report_to_json(const FeasibilityReport& report);

}  // namespace ntnlab::feas
