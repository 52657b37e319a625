#pragma once

#include <cstdint>
#include <random>

#include "ntnlab/geometry.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::sim {

// Fixed-delay satellite channel between a UE-side node and the node that
// terminates the procedure (gNB at the gateway for transparent payloads,
// the on-board gNB for regenerative ones). With default loss and jitter,
// delivery time is exactly send time + delay.
struct DelayChannel {
    double uplink_delay_ms = 0.0;
    double downlink_delay_ms = 0.0;
    double loss_probability = 0.0;  // per-transport-block decode failure
    double jitter_ms = 0.0;         // uniform [0, jitter] per message

    double rtt_ms() const { return uplink_delay_ms + downlink_delay_ms; }

    void validate() const {
        if (uplink_delay_ms < 0.0 || downlink_delay_ms < 0.0) {
            throw std::invalid_argument("channel delays must be >= 0");
        }
        if (loss_probability < 0.0 || loss_probability > 1.0) {
            throw std::invalid_argument("loss_probability must be in [0, 1]");
        }
        if (jitter_ms < 0.0) {
            throw std::invalid_argument("jitter_ms must be >= 0");
        }
    }

    // Worst-case symmetric delays from the scenario geometry.
    static DelayChannel from_scenario(const ScenarioConfig& scenario,
                                      const PhysicalConstants& pc = {}) {
        const auto rt = geometry::round_trip_time(scenario, pc);
        DelayChannel ch;
        ch.uplink_delay_ms = rt.one_way_ms;
        ch.downlink_delay_ms = rt.one_way_ms;
        return ch;
    }
};

// Mixes a stream index into a base seed so independent random streams can
// be derived per UE / per stage without correlation (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ntnlab::sim
