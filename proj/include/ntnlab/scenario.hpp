#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ntnlab/constants.hpp"

namespace ntnlab {

// Thrown when a scenario file cannot be parsed at all (bad JSON, missing or
// unknown keys, wrong types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a parsed scenario violates a field invariant. The message
// names the offending field.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Architecture { A1, A2, A3, A4 };
enum class Service { Embb, NbIot };

std::string to_string(Architecture a);
std::string to_string(Service s);
Architecture architecture_from_string(const std::string& s);
Service service_from_string(const std::string& s);

// True for the regenerative-payload options (gNB on board, procedures
// terminate at the satellite).
inline bool is_regenerative(Architecture a) {
    return a == Architecture::A2 || a == Architecture::A4;
}

// MAC-layer timer and counter set. Default-constructed values are the NR
// ones; nbiot_defaults() stretches the RA windows to their NB-IoT maxima.
struct TimerSet {
    double rar_window_ms = 15.0;
    double contention_resolution_ms = 64.0;
    double time_alignment_timer_s = 10.24;
    int preamble_max_attempts = 200;
    int contention_max_attempts = 16;
    int harq_ack_offset_k = 4;          // subframes
    int nbiot_max_repetitions = 128;
    int nbiot_coverage_levels = 3;
    int nbiot_attempts_per_level = 10;

    static TimerSet nr_defaults() { return TimerSet{}; }
    static TimerSet nbiot_defaults();

    void validate() const;
    bool operator==(const TimerSet&) const = default;
};

struct ScenarioConfig {
    std::string name;
    Architecture architecture = Architecture::A1;
    Service service = Service::Embb;
    double h_sat_km = 0.0;
    double carrier_dl_hz = 0.0;
    double carrier_ul_hz = 0.0;
    double elevation_gw_deg = 5.0;
    double min_elevation_rx_deg = 10.0;
    int mu = 0;  // numerology index, subcarrier spacing 15*2^mu kHz
    TimerSet timers;

    // Only FDD framing is modelled.
    static constexpr std::string_view duplex = "FDD";

    bool regenerative() const { return is_regenerative(architecture); }

    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

// Loads and validates a scenario JSON file. Unknown keys are rejected;
// omitted timer fields get the defaults of the scenario's service type.
ScenarioConfig load_scenario(const std::string& path);

// Same, but from an in-memory JSON string (used by load_scenario and tests).
ScenarioConfig parse_scenario(const std::string& json_text);

// Serializes to the documented schema (round-trips through parse_scenario).
std::string serialize_scenario(const ScenarioConfig& cfg);

// The three reference scenarios: eMBB over GEO via relay nodes (A3) and the
// NB-IoT LEO constellation end points (600 and 1500 km, direct access A1).
std::vector<ScenarioConfig> builtin_scenarios();

// Looks a builtin up by name ("embb_geo", "nbiot_leo600", "nbiot_leo1500").
// Throws ValidationError for unknown names.
ScenarioConfig builtin_scenario(const std::string& name);

// Regenerative variant of a scenario: A1 -> A2, A3 -> A4.
ScenarioConfig as_regenerative(ScenarioConfig cfg);

}  // namespace ntnlab
