#include "ntnlab/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ntnlab/geometry.hpp"
#include "ntnlab/numerology.hpp"

namespace ntnlab::feas {

namespace {

CheckResult make_timer_check(const std::string& name, double timer_ms,
                             double required_ms, const std::string& remedy) {
    CheckResult c;
    c.name = name;
    c.constraint_value = timer_ms;
    c.constraint_unit = "ms";
    c.scenario_value = required_ms;
    c.value_unit = "ms";
    if (timer_ms >= required_ms) {
        c.verdict = Verdict::Pass;
    } else {
        c.verdict = Verdict::Fail;
        c.remedy = remedy;
        c.suggested_extension = required_ms;  // extend the window to at least this
    }
    return c;
}

}  // namespace

std::vector<CheckResult> check_ra_timers(const ScenarioConfig& scenario,
                                         double core_delay_ms,
                                         const PhysicalConstants& pc) {
    scenario.validate();
    if (core_delay_ms < 0.0) {
        throw std::invalid_argument("core_delay_ms must be >= 0");
    }
    const auto rt = geometry::round_trip_time(scenario, pc);
    std::vector<CheckResult> out;
    out.push_back(make_timer_check(
        "ra_rar_window", scenario.timers.rar_window_ms, rt.rtt_ms,
        "extend the RAR time window to cover the round trip"));
    out.push_back(make_timer_check(
        "ra_contention_resolution", scenario.timers.contention_resolution_ms,
        rt.rtt_ms + core_delay_ms,
        "extend the contention resolution timer to cover the round trip"));
    return out;
}

std::vector<CheckResult> check_ta(const ScenarioConfig& scenario,
                                  double max_ue_separation_km,
                                  const PhysicalConstants& pc) {
    scenario.validate();
    if (max_ue_separation_km < 0.0) {
        throw std::invalid_argument("max_ue_separation_km must be >= 0");
    }
    const auto rt = geometry::round_trip_time(scenario, pc);
    std::vector<CheckResult> out;

    out.push_back(make_timer_check(
        "ta_alignment_timer", scenario.timers.time_alignment_timer_s * 1e3,
        rt.rtt_ms, "extend timeAlignmentTimer beyond the round trip"));

    // Differential-delay headroom of the TA command range.
    const bool nbiot = scenario.service == Service::NbIot;
    const double max_ta_s = nbiot
                                ? nbiot_ta_time_s(nbiot_max_ta_command())
                                : ta_time_s(kMaxTaCommand, scenario.mu);
    const double limit_km = differential_delay_limit_km(max_ta_s, pc);

    CheckResult diff;
    diff.name = "ta_differential_delay";
    diff.constraint_value = limit_km;
    diff.constraint_unit = "km";
    diff.value_unit = "km";
    if (scenario.architecture == Architecture::A3 ||
        scenario.architecture == Architecture::A4) {
        // Fixed relay nodes: per-RN delay is set once at deployment, so the
        // TA range only has to track orbit drift.
        diff.scenario_value = max_ue_separation_km;
        diff.verdict = Verdict::Pass;
        diff.remedy = "set per-RN timing at deployment (ad hoc system deployment)";
    } else if (max_ue_separation_km == 0.0) {
        diff.scenario_value = 0.0;
        diff.verdict = Verdict::Pass;
    } else {
        const auto stats = geometry::max_range_difference_km(
            max_ue_separation_km, scenario.h_sat_km, limit_km,
            scenario.min_elevation_rx_deg, pc);
        diff.scenario_value = stats.max_abs_km;
        if (stats.max_abs_km <= limit_km) {
            diff.verdict = Verdict::Pass;
        } else {
            diff.verdict = Verdict::Fail;
            diff.suggested_extension = stats.max_abs_km;
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "restrict uplink to the pass window within the TA "
                          "budget (%.1f%% of the pass) or add per-UE delay "
                          "offsets",
                          stats.fraction_within_budget * 100.0);
            diff.remedy = buf;
        }
    }
    out.push_back(diff);
    return out;
}

std::vector<CheckResult> check_harq(const ScenarioConfig& scenario,
                                    const ReportOptions& options,
                                    const PhysicalConstants& pc) {
    scenario.validate();
    const auto rt = geometry::round_trip_time(scenario, pc);
    const Numerology num{scenario.mu};
    const auto dim =
        harq_dimension(rt.one_way_ms, options.harq_t_proc_ms, num.tti_ms());

    std::vector<CheckResult> out;
    CheckResult c;
    c.name = "harq_processes";
    c.constraint_value = options.harq_process_cap;
    c.constraint_unit = "processes";
    c.scenario_value = dim.n_min;
    c.value_unit = "processes";
    if (scenario.service == Service::NbIot) {
        // Single-process stop-and-wait stays standard compliant; the link
        // just idles between blocks.
        c.verdict = Verdict::Pass;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "1 process operates unchanged at reduced throughput "
                      "(duty cycle ~%.3f with %.4g ms cycle)",
                      std::min(1.0, num.tti_ms() / dim.t_harq_ms), dim.t_harq_ms);
        c.remedy = buf;
    } else if (dim.n_min <= options.harq_process_cap) {
        c.verdict = Verdict::Pass;
    } else {
        c.verdict = Verdict::Fail;
        c.suggested_extension = dim.n_min;
        char buf[220];
        std::snprintf(buf, sizeof(buf),
                      "needs %d processes (DCI id >= %d bits, buffer ~%.0f "
                      "units); or: 2-bit ACK, fewer processes at reduced "
                      "throughput, larger soft buffer, or no HARQ",
                      dim.n_min, dim.dci_bits, dim.buffer_units);
        c.remedy = buf;
    }
    out.push_back(c);
    return out;
}

double frequency_advance_residual_hz(double true_offset_hz,
                                     double estimated_offset_hz) {
    return std::abs(true_offset_hz - estimated_offset_hz);
}

std::vector<CheckResult> check_frequency(const ScenarioConfig& scenario,
                                         double ue_separation_km,
                                         const ReportOptions& options,
                                         const PhysicalConstants& pc) {
    scenario.validate();
    std::vector<CheckResult> out;

    if (scenario.service == Service::Embb) {
        // GEO satellite and fixed relay nodes: no relative motion worth
        // tracking on the backhaul link.
        CheckResult c;
        c.name = "doppler_negligible";
        c.constraint_value = options.doppler_constraint_hz;
        c.constraint_unit = "Hz";
        c.scenario_value = 0.0;
        c.value_unit = "Hz";
        c.verdict = Verdict::Pass;
        c.remedy = "GEO with fixed RNs: Doppler shift assumed negligible";
        out.push_back(c);
        return out;
    }

    const double carrier = scenario.carrier_ul_hz;
    const double diff_doppler = geometry::max_differential_doppler_hz(
        ue_separation_km, scenario.h_sat_km, carrier,
        scenario.min_elevation_rx_deg, pc);

    CheckResult diff;
    diff.name = "differential_doppler";
    diff.constraint_value = options.doppler_constraint_hz;
    diff.constraint_unit = "Hz";
    diff.scenario_value = diff_doppler;
    diff.value_unit = "Hz";
    if (diff_doppler <= options.doppler_constraint_hz) {
        diff.verdict = Verdict::Pass;
    } else {
        diff.verdict = Verdict::Fail;
        diff.suggested_extension = diff_doppler;
        diff.remedy =
            "pre-compensate differential Doppler at each nUE (frequency "
            "advance adapted to channel-induced offsets)";
    }
    out.push_back(diff);

    // Common Doppler peaks at the lowest elevation of the visible pass.
    const double common = std::abs(geometry::doppler_shift_hz(
        carrier, scenario.h_sat_km, scenario.min_elevation_rx_deg, true, pc));
    CheckResult com;
    com.name = "common_doppler_cfo_raster";
    com.constraint_value = options.cfo_raster_hz;
    com.constraint_unit = "Hz";
    com.scenario_value = common;
    com.value_unit = "Hz";
    if (common <= options.cfo_raster_hz) {
        com.verdict = Verdict::Pass;
    } else {
        com.verdict = Verdict::Fail;
        com.suggested_extension = common;
        com.remedy = "compensate the common Doppler with a GNSS-based estimate";
    }
    out.push_back(com);

    // Residual offsets against the 3.75 kHz tone grid, assuming the common
    // part is removed but the differential part is not.
    CheckResult res;
    res.name = "residual_vs_subcarrier_spacing";
    res.constraint_value = options.nbiot_subcarrier_hz;
    res.constraint_unit = "Hz";
    res.scenario_value = diff_doppler;
    res.value_unit = "Hz";
    if (diff_doppler <= options.nbiot_subcarrier_hz) {
        res.verdict = Verdict::Pass;
    } else {
        res.verdict = Verdict::Fail;
        res.suggested_extension = diff_doppler;
        res.remedy = "residual exceeds one 3.75 kHz tone; per-UE "
                     "pre-compensation required before SC-FDMA multiplexing";
    }
    out.push_back(res);
    return out;
}

FeasibilityReport full_report(const ScenarioConfig& scenario,
                              const ReportOptions& options,
                              const PhysicalConstants& pc) {
    FeasibilityReport report;
    report.scenario = scenario.name;
    report.architecture = scenario.architecture;

    auto append = [&report](std::vector<CheckResult> checks) {
        for (auto& c : checks) {
            report.checks.push_back(std::move(c));
        }
    };
    append(check_ra_timers(scenario, options.core_delay_ms, pc));
    append(check_ta(scenario, options.max_ue_separation_km, pc));
    append(check_harq(scenario, options, pc));
    append(check_frequency(scenario, options.max_ue_separation_km, options, pc));

    for (const auto& c : report.checks) {
        (c.verdict == Verdict::Pass ? report.n_pass : report.n_fail)++;
    }
    return report;
}

std::string report_to_json(const FeasibilityReport& report) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["architecture"] = to_string(report.architecture);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["constraint"] = c.constraint_value;
        jc["constraint_unit"] = c.constraint_unit;
        jc["value"] = c.scenario_value;
        jc["value_unit"] = c.value_unit;
        jc["verdict"] = to_string(c.verdict);
        jc["remedy"] = c.remedy;
        if (c.suggested_extension) {
            jc["suggested_extension"] = *c.suggested_extension;
        }
        checks.push_back(jc);
    }
    j["checks"] = checks;
    j["summary"] = {{"pass", report.n_pass}, {"fail", report.n_fail}};
    return j.dump(2) + "\n";
}

}  // namespace ntnlab::feas
