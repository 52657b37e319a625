#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ntnlab/channel.hpp"
#include "ntnlab/nprach.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::sim {

enum class RaMode { ContentionBased, ContentionFree };

enum class RaFailureCause {
    None,
    RarWindowExpired,
    ContentionUnresolved,
};

struct RaUeOutcome {
    bool success = false;
    double access_delay_s = 0.0;  // procedure start to connection
    int attempts = 0;             // msg1 transmissions
    int coverage_level = 0;       // NB-IoT final level
    RaFailureCause cause = RaFailureCause::None;
};

struct RaConfig {
    int n_ues = 1;
    std::uint64_t seed = 0;
    RaMode mode = RaMode::ContentionBased;
    double occasion_period_ms = 10.0;  // PRACH occasion grid
    double gnb_processing_ms = 0.0;
    double ue_processing_ms = 0.0;
    double core_delay_ms = 0.0;        // extra msg3->msg4 turnaround (NGC leg)
    int preamble_pool = 64;            // shrink to force collisions
    NprachFormat nprach_format = NprachFormat::F0;

    void validate() const;
};

struct RaResult {
    std::vector<RaUeOutcome> outcomes;
    std::string event_log;

    double success_rate() const {
        if (outcomes.empty()) return 0.0;
        std::size_t ok = 0;
        for (const auto& o : outcomes) ok += o.success ? 1 : 0;
        return static_cast<double>(ok) / static_cast<double>(outcomes.size());
    }
};

// Event-accurate random access over the delay channel. NR sessions follow
// the four-message procedure with the RAR window and contention resolution
// timer from the scenario's TimerSet; NB-IoT sessions add NPRACH repetition
// airtime, the 4/64-subframe RAR window start offset and coverage-level
// escalation. Identical (scenario, channel, config) inputs reproduce a
// byte-identical event log.
RaResult simulate_ra(const ScenarioConfig& scenario, const DelayChannel& channel,
                     const RaConfig& config);

inline RaResult simulate_ra(const ScenarioConfig& scenario,
                            const DelayChannel& channel, int n_ues,
                            std::uint64_t seed) {
    RaConfig cfg;
    cfg.n_ues = n_ues;
    cfg.seed = seed;
    return simulate_ra(scenario, channel, cfg);
}

// NB-IoT repetition count used at a coverage level (geometric ramp ending
// at the configured maximum: 128 -> {8, 32, 128} over three levels).
int nbiot_repetitions_for_level(int level, const TimerSet& timers);

}  // namespace ntnlab::sim
