#include "ntnlab/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ntnlab {

using ordered_json = nlohmann::ordered_json;

void PhysicalConstants::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string("constants.") + field + " must be > 0");
        }
    };
    positive(c_mps, "c_mps");
    positive(g_nm2_kg2, "g_nm2_kg2");
    positive(earth_mass_kg, "earth_mass_kg");
    positive(earth_radius_km, "earth_radius_km");
}

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::A1: return "A1";
        case Architecture::A2: return "A2";
        case Architecture::A3: return "A3";
        case Architecture::A4: return "A4";
    }
    return "A1";
}

std::string to_string(Service s) {
    return s == Service::Embb ? "eMBB" : "NB-IoT";
}

Architecture architecture_from_string(const std::string& s) {
    if (s == "A1") return Architecture::A1;
    if (s == "A2") return Architecture::A2;
    if (s == "A3") return Architecture::A3;
    if (s == "A4") return Architecture::A4;
    throw ValidationError("architecture must be one of A1..A4, got '" + s + "'");
}

Service service_from_string(const std::string& s) {
    if (s == "eMBB") return Service::Embb;
    if (s == "NB-IoT") return Service::NbIot;
    throw ValidationError("service must be 'eMBB' or 'NB-IoT', got '" + s + "'");
}

TimerSet TimerSet::nbiot_defaults() {
    TimerSet t;
    t.rar_window_ms = 10240.0;
    t.contention_resolution_ms = 10240.0;
    t.preamble_max_attempts = 200;
    return t;
}

void TimerSet::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string("timers.") + field + " must be > 0");
        }
    };
    auto positive_int = [](int v, const char* field) {
        if (v <= 0) {
            throw ValidationError(std::string("timers.") + field + " must be > 0");
        }
    };
    positive(rar_window_ms, "rar_window_ms");
    positive(contention_resolution_ms, "contention_resolution_ms");
    positive(time_alignment_timer_s, "time_alignment_timer_s");
    positive_int(preamble_max_attempts, "preamble_max_attempts");
    positive_int(contention_max_attempts, "contention_max_attempts");
    positive_int(harq_ack_offset_k, "harq_ack_offset_k");
    positive_int(nbiot_max_repetitions, "nbiot_max_repetitions");
    positive_int(nbiot_coverage_levels, "nbiot_coverage_levels");
    positive_int(nbiot_attempts_per_level, "nbiot_attempts_per_level");
    if (nbiot_max_repetitions > 128) {
        throw ValidationError("timers.nbiot_max_repetitions must be <= 128");
    }
    if (nbiot_coverage_levels > 3) {
        throw ValidationError("timers.nbiot_coverage_levels must be <= 3");
    }
}

void ScenarioConfig::validate() const {
    if (name.empty()) {
        throw ValidationError("name must not be empty");
    }
    if (!(h_sat_km > 0.0)) {
        throw ValidationError("h_sat_km must be > 0");
    }
    if (!(carrier_dl_hz > 0.0)) {
        throw ValidationError("carrier_dl_hz must be > 0");
    }
    if (!(carrier_ul_hz > 0.0)) {
        throw ValidationError("carrier_ul_hz must be > 0");
    }
    auto elevation_ok = [](double e) { return e > 0.0 && e <= 90.0; };
    if (!elevation_ok(elevation_gw_deg)) {
        throw ValidationError("elevation_gw_deg must be in (0, 90]");
    }
    if (!elevation_ok(min_elevation_rx_deg)) {
        throw ValidationError("min_elevation_rx_deg must be in (0, 90]");
    }
    if (mu < 0 || mu > 5) {
        throw ValidationError("mu must be in 0..5");
    }
    timers.validate();
}

namespace {

const std::set<std::string> kTopLevelKeys = {
    "name",          "architecture",     "service",
    "h_sat_km",      "carrier_dl_hz",    "carrier_ul_hz",
    "elevation_gw_deg", "min_elevation_rx_deg", "mu", "timers"};

const std::set<std::string> kTimerKeys = {
    "rar_window_ms",        "contention_resolution_ms", "time_alignment_timer_s",
    "preamble_max_attempts", "contention_max_attempts", "harq_ack_offset_k",
    "nbiot_max_repetitions", "nbiot_coverage_levels",   "nbiot_attempts_per_level"};

void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError("unknown key '" + where + it.key() + "'");
        }
    }
}

template <typename T>
T require(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw ParseError("missing required key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("key '" + key + "' has the wrong type: " + e.what());
    }
}

template <typename T>
void read_optional(const ordered_json& j, const std::string& key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("key 'timers." + key + "' has the wrong type: " + e.what());
    }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError("scenario file must contain a JSON object");
    }
    reject_unknown_keys(j, kTopLevelKeys, "");

    ScenarioConfig cfg;
    cfg.name = require<std::string>(j, "name");
    cfg.architecture = architecture_from_string(require<std::string>(j, "architecture"));
    cfg.service = service_from_string(require<std::string>(j, "service"));
    cfg.h_sat_km = require<double>(j, "h_sat_km");
    cfg.carrier_dl_hz = require<double>(j, "carrier_dl_hz");
    cfg.carrier_ul_hz = require<double>(j, "carrier_ul_hz");
    cfg.elevation_gw_deg = require<double>(j, "elevation_gw_deg");
    cfg.min_elevation_rx_deg = require<double>(j, "min_elevation_rx_deg");
    cfg.mu = require<int>(j, "mu");

    cfg.timers = cfg.service == Service::NbIot ? TimerSet::nbiot_defaults()
                                               : TimerSet::nr_defaults();
    if (j.contains("timers")) {
        const auto& t = j.at("timers");
        if (!t.is_object()) {
            throw ParseError("'timers' must be an object");
        }
        reject_unknown_keys(t, kTimerKeys, "timers.");
        read_optional(t, "rar_window_ms", cfg.timers.rar_window_ms);
        read_optional(t, "contention_resolution_ms", cfg.timers.contention_resolution_ms);
        read_optional(t, "time_alignment_timer_s", cfg.timers.time_alignment_timer_s);
        read_optional(t, "preamble_max_attempts", cfg.timers.preamble_max_attempts);
        read_optional(t, "contention_max_attempts", cfg.timers.contention_max_attempts);
        read_optional(t, "harq_ack_offset_k", cfg.timers.harq_ack_offset_k);
        read_optional(t, "nbiot_max_repetitions", cfg.timers.nbiot_max_repetitions);
        read_optional(t, "nbiot_coverage_levels", cfg.timers.nbiot_coverage_levels);
        read_optional(t, "nbiot_attempts_per_level", cfg.timers.nbiot_attempts_per_level);
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    ordered_json j;
    j["name"] = cfg.name;
    j["architecture"] = to_string(cfg.architecture);
    j["service"] = to_string(cfg.service);
    j["h_sat_km"] = cfg.h_sat_km;
    j["carrier_dl_hz"] = cfg.carrier_dl_hz;
    j["carrier_ul_hz"] = cfg.carrier_ul_hz;
    j["elevation_gw_deg"] = cfg.elevation_gw_deg;
    j["min_elevation_rx_deg"] = cfg.min_elevation_rx_deg;
    j["mu"] = cfg.mu;
    ordered_json t;
    t["rar_window_ms"] = cfg.timers.rar_window_ms;
    t["contention_resolution_ms"] = cfg.timers.contention_resolution_ms;
    t["time_alignment_timer_s"] = cfg.timers.time_alignment_timer_s;
    t["preamble_max_attempts"] = cfg.timers.preamble_max_attempts;
    t["contention_max_attempts"] = cfg.timers.contention_max_attempts;
    t["harq_ack_offset_k"] = cfg.timers.harq_ack_offset_k;
    t["nbiot_max_repetitions"] = cfg.timers.nbiot_max_repetitions;
    t["nbiot_coverage_levels"] = cfg.timers.nbiot_coverage_levels;
    t["nbiot_attempts_per_level"] = cfg.timers.nbiot_attempts_per_level;
    j["timers"] = t;
    return j.dump(2) + "\n";
}

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> out;

    ScenarioConfig embb;
    embb.name = "embb_geo";
    embb.architecture = Architecture::A3;
    embb.service = Service::Embb;
    embb.h_sat_km = 35786.0;
    embb.carrier_dl_hz = 20.0e9;  // representative Ka-band carriers
    embb.carrier_ul_hz = 30.0e9;
    embb.elevation_gw_deg = 5.0;
    embb.min_elevation_rx_deg = 10.0;
    embb.mu = 0;
    embb.timers = TimerSet::nr_defaults();
    out.push_back(embb);

    ScenarioConfig leo600;
    leo600.name = "nbiot_leo600";
    leo600.architecture = Architecture::A1;
    leo600.service = Service::NbIot;
    leo600.h_sat_km = 600.0;
    leo600.carrier_dl_hz = 2.2e9;
    leo600.carrier_ul_hz = 2.2e9;
    leo600.elevation_gw_deg = 5.0;
    leo600.min_elevation_rx_deg = 10.0;
    leo600.mu = 0;
    leo600.timers = TimerSet::nbiot_defaults();
    out.push_back(leo600);

    ScenarioConfig leo1500 = leo600;
    leo1500.name = "nbiot_leo1500";
    leo1500.h_sat_km = 1500.0;
    out.push_back(leo1500);

    for (const auto& s : out) {
        s.validate();
    }
    return out;
}

ScenarioConfig builtin_scenario(const std::string& name) {
    for (auto& s : builtin_scenarios()) {
        if (s.name == name) return s;
    }
    throw ValidationError("unknown builtin scenario '" + name +
                          "' (expected embb_geo, nbiot_leo600 or nbiot_leo1500)");
}

ScenarioConfig as_regenerative(ScenarioConfig cfg) {
    switch (cfg.architecture) {
        case Architecture::A1: cfg.architecture = Architecture::A2; break;
        case Architecture::A3: cfg.architecture = Architecture::A4; break;
        default: break;
    }
    return cfg;
}

}  // namespace ntnlab
