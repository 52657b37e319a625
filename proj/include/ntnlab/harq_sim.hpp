#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "ntnlab/channel.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::sim {

enum class HarqMode { NrAsyncAdaptive, NbIotBundled };

struct HarqConfig {
    int n_processes = 8;
    double tti_ms = 1.0;
    double duration_s = 1.0;
    std::uint64_t seed = 0;
    HarqMode mode = HarqMode::NrAsyncAdaptive;
    // Per-leg turnaround (decode + schedule) at each end, counted from the
    // start of the received block; together with the propagation delays it
    // reproduces T_HARQ = 2 * (t_owp + t_proc). The 3 ms default is the
    // terrestrial decomposition behind the k = 4 subframe ACK timing.
    double t_proc_ms = 3.0;
    int max_retransmissions = 4;
    // NB-IoT bundling: the whole bundle is retransmitted on NACK, and the
    // relaxed decode offsets replace the NR turnaround.
    int bundle_repetitions = 1;
    double nbiot_ack_offset_ms = 12.0;   // data end -> ACK transmission
    double nbiot_retx_offset_ms = 3.0;   // ACK reception -> next bundle

    void validate() const;
};

struct HarqStats {
    std::uint64_t tb_sent = 0;       // distinct transport blocks
    std::uint64_t tb_acked = 0;
    std::uint64_t tb_dropped = 0;    // retransmission cap exhausted
    std::uint64_t tb_in_flight_end = 0;
    std::uint64_t transmissions = 0; // including retransmissions
    std::uint64_t retransmissions = 0;
    std::uint64_t max_in_flight = 0; // checked against n_processes every event
    double busy_time_s = 0.0;        // link airtime within the run
    double utilization = 0.0;        // busy / duration
    double throughput_tb_s = 0.0;    // acked TBs per second
    std::string event_log;
};

// Stop-and-wait HARQ with n parallel processes saturating one link: every
// free process is immediately reloaded, transmissions serialize on the
// link, and a process frees when its ACK returns. For a lossless channel
// utilization approaches min(1, n * TTI / T_HARQ).
HarqStats simulate_harq(const ScenarioConfig& scenario,
                        const DelayChannel& channel, const HarqConfig& config);

// Convenience overload: turnaround taken from the scenario's k-subframe
// ACK offset, of which one subframe is the terrestrial propagation share
// (k = 4 -> 3 ms of processing per leg).
inline HarqStats simulate_harq(const ScenarioConfig& scenario,
                               const DelayChannel& channel, int n_processes,
                               double tti_ms, double duration_s,
                               std::uint64_t seed) {
    HarqConfig cfg;
    cfg.n_processes = n_processes;
    cfg.tti_ms = tti_ms;
    cfg.duration_s = duration_s;
    cfg.seed = seed;
    cfg.t_proc_ms =
        std::max(0.0, static_cast<double>(scenario.timers.harq_ack_offset_k) - 1.0);
    if (scenario.service == Service::NbIot) {
        cfg.mode = HarqMode::NbIotBundled;
        cfg.n_processes = std::min(n_processes, 2);
    }
    return simulate_harq(scenario, channel, cfg);
}

}  // namespace ntnlab::sim
