// ntnlab: link geometry, MAC-procedure feasibility and waveform studies for
// 5G over GEO/LEO satellites. Subcommands emit plot-ready CSV/JSON plus a
// manifest with a content hash per artifact; every stochastic run is fully
// determined by (scenario, seed).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ntnlab/feasibility.hpp"
#include "ntnlab/geometry.hpp"
#include "ntnlab/harq_sim.hpp"
#include "ntnlab/io.hpp"
#include "ntnlab/numerology.hpp"
#include "ntnlab/papr.hpp"
#include "ntnlab/ra_sim.hpp"
#include "ntnlab/scenario.hpp"
#include "ntnlab/waveform_study.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ntnlab;

namespace {

ScenarioConfig resolve_scenario(const std::string& ref) {
    if (ref.find('/') != std::string::npos || ref.ends_with(".json")) {
        return load_scenario(ref);
    }
    if (const char* dir = std::getenv("NTN_LAB_BUILTIN_DIR")) {
        const fs::path candidate = fs::path(dir) / (ref + ".json");
        if (fs::exists(candidate)) {
            return load_scenario(candidate.string());
        }
    }
    return builtin_scenario(ref);
}

// Parses "key=v1,v2,..." sweep specifications.
struct Sweep {
    std::string key;
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
        throw ValidationError("--sweep expects key=v1,v2,... got '" + text + "'");
    }
    Sweep s;
    s.key = text.substr(0, eq);
    std::stringstream ss(text.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            s.values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("--sweep value '" + item + "' is not a number");
        }
    }
    if (s.values.empty()) {
        throw ValidationError("--sweep needs at least one value");
    }
    return s;
}

struct OutputDir {
    fs::path dir;
    std::vector<std::string> files;

    explicit OutputDir(const std::string& path) : dir(path) {
        fs::create_directories(dir);
    }
    std::ofstream open(const std::string& name) {
        files.push_back(name);
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        return out;
    }
    void finish(const std::string& scenario, std::uint64_t seed) {
        io::write_manifest(dir.string(), scenario, seed, files);
        std::cout << "wrote " << files.size() << " artifact(s) + manifest to "
                  << dir.string() << "\n";
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// --- geometry ---------------------------------------------------------

int run_geometry(const std::string& scenario_ref, const std::string& out_dir,
                 const std::string& format) {
    const auto sc = resolve_scenario(scenario_ref);
    const auto rt = geometry::round_trip_time(sc);
    const auto gw = geometry::link_geometry(sc.h_sat_km, sc.elevation_gw_deg);
    const auto rx = geometry::link_geometry(sc.h_sat_km, sc.min_elevation_rx_deg);

    OutputDir out(out_dir);
    if (format == "csv") {
        auto f = out.open("geometry.csv");
        f << "scenario,h_sat_km,leg,elevation_deg,distance_km,delay_ms\n";
        f << sc.name << ',' << fmt(sc.h_sat_km) << ",sat_rx,"
          << fmt(rx.elevation_deg) << ',' << fmt(rx.slant_range_km) << ','
          << fmt(rx.one_way_delay_ms) << "\n";
        if (!sc.regenerative()) {
            f << sc.name << ',' << fmt(sc.h_sat_km) << ",sat_gw,"
              << fmt(gw.elevation_deg) << ',' << fmt(gw.slant_range_km) << ','
              << fmt(gw.one_way_delay_ms) << "\n";
        }
        f << sc.name << ',' << fmt(sc.h_sat_km) << ",one_way,,,"
          << fmt(rt.one_way_ms) << "\n";
        f << sc.name << ',' << fmt(sc.h_sat_km) << ",rtt,,," << fmt(rt.rtt_ms)
          << "\n";
    } else {
        ordered_json j;
        j["scenario"] = sc.name;
        j["h_sat_km"] = sc.h_sat_km;
        j["sat_rx"] = {{"elevation_deg", rx.elevation_deg},
                       {"distance_km", rx.slant_range_km},
                       {"delay_ms", rx.one_way_delay_ms}};
        if (!sc.regenerative()) {
            j["sat_gw"] = {{"elevation_deg", gw.elevation_deg},
                           {"distance_km", gw.slant_range_km},
                           {"delay_ms", gw.one_way_delay_ms}};
        }
        j["one_way_ms"] = rt.one_way_ms;
        j["rtt_ms"] = rt.rtt_ms;
        auto f = out.open("geometry.json");
        f << j.dump(2) << "\n";
    }
    std::cout << sc.name << ": one-way " << fmt(rt.one_way_ms) << " ms, RTT "
              << fmt(rt.rtt_ms) << " ms\n";
    out.finish(sc.name, 0);
    return 0;
}

// --- doppler ----------------------------------------------------------

int run_doppler(const std::string& scenario_ref, const std::string& out_dir,
                std::vector<double> separations_km, double step_ms,
                const std::vector<std::string>& sweeps) {
    const auto sc = resolve_scenario(scenario_ref);
    if (separations_km.empty()) {
        separations_km = {40.0, 200.0};
    }
    std::vector<double> altitudes = {sc.h_sat_km};
    for (const auto& text : sweeps) {
        const Sweep s = parse_sweep(text);
        if (s.key == "h_sat_km") {
            altitudes = s.values;
        } else if (s.key == "separation_km") {
            separations_km = s.values;
        } else {
            throw ValidationError("doppler sweeps support h_sat_km and "
                                  "separation_km, got '" + s.key + "'");
        }
    }

    struct Item {
        double h, sep;
        std::string name;
        std::string csv;
        double max_diff = 0.0, max_common = 0.0;
    };
    std::vector<Item> items;
    for (double h : altitudes) {
        for (double sep : separations_km) {
            char name[80];
            std::snprintf(name, sizeof(name), "doppler_h%g_sep%g.csv", h, sep);
            items.push_back(Item{h, sep, name, {}, 0.0, 0.0});
        }
    }

    // Independent passes; results land in per-item slots so the fan-out
    // cannot reorder anything.
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(items.size()); ++i) {
        Item& item = items[static_cast<std::size_t>(i)];
        geometry::PassGeometry pass;
        pass.h_sat_km = item.h;
        pass.ue_track_offsets_km = {0.0, item.sep};
        pass.min_elevation_deg = sc.min_elevation_rx_deg;
        pass.time_step_s = step_ms * 1e-3;
        pass.carrier_hz = sc.carrier_ul_hz;
        const auto series = geometry::differential_doppler(pass);

        std::ostringstream csv;
        geometry::write_doppler_csv(csv, series);
        item.csv = csv.str();
        for (std::size_t k = 0; k < series.t_s.size(); ++k) {
            item.max_diff =
                std::max(item.max_diff, std::abs(series.diff_doppler_hz[1][k]));
            item.max_common =
                std::max(item.max_common, std::abs(series.common_doppler_hz[k]));
        }
    }

    OutputDir out(out_dir);
    ordered_json summary;
    summary["scenario"] = sc.name;
    summary["carrier_hz"] = sc.carrier_ul_hz;
    ordered_json runs = ordered_json::array();
    for (const auto& item : items) {
        out.open(item.name) << item.csv;
        ordered_json r;
        r["h_sat_km"] = item.h;
        r["separation_km"] = item.sep;
        r["file"] = item.name;
        r["max_differential_doppler_hz"] = item.max_diff;
        r["max_common_doppler_hz"] = item.max_common;
        runs.push_back(r);
        std::cout << "h=" << item.h << " km, sep=" << item.sep
                  << " km: max |diff doppler| " << fmt(item.max_diff) << " Hz\n";
    }
    summary["runs"] = runs;
    auto f = out.open("doppler_summary.json");
    f << summary.dump(2) << "\n";
    out.finish(sc.name, 0);
    return 0;
}

// --- ta ----------------------------------------------------------------

int run_ta(const std::string& out_dir) {
    OutputDir out(out_dir);
    auto f = out.open("ta.csv");
    f << "system,mu,scs_khz,t_ta_max_ms,step_m,max_distance_km\n";
    for (int mu = 0; mu <= 5; ++mu) {
        const Numerology n{mu};
        f << "nr," << mu << ',' << fmt(n.scs_khz()) << ','
          << fmt(ta_time_s(kMaxTaCommand, mu) * 1e3) << ','
          << fmt(ta_distance_step_m(mu)) << ','
          << fmt(max_compensable_distance_km(mu)) << "\n";
    }
    const int nb_max = nbiot_max_ta_command();
    f << "nbiot,," << fmt(3.75) << ',' << fmt(nbiot_ta_time_s(nb_max) * 1e3)
      << ',' << fmt(PhysicalConstants{}.c_mps * nbiot_ta_time_s(1) / 2.0) << ','
      << fmt(differential_delay_limit_km(nbiot_ta_time_s(nb_max))) << "\n";
    std::cout << "NR max TA 0.667 ms (mu=0) .. " << fmt(ta_time_s(1282, 5) * 1e3)
              << " ms (mu=5); NB-IoT budget "
              << fmt(nbiot_ta_time_s(nb_max) * 1e3) << " ms\n";
    out.finish("numerology", 0);
    return 0;
}

// --- harq ---------------------------------------------------------------

int run_harq(const std::string& scenario_ref, const std::string& out_dir,
             double t_proc_ms, double tti_ms) {
    const auto sc = resolve_scenario(scenario_ref);
    const auto rt = geometry::round_trip_time(sc);
    const double tti = tti_ms > 0.0 ? tti_ms : Numerology{sc.mu}.tti_ms();
    const auto dim = harq_dimension(rt.one_way_ms, t_proc_ms, tti);

    OutputDir out(out_dir);
    ordered_json j;
    j["scenario"] = sc.name;
    j["t_owp_ms"] = dim.t_owp_ms;
    j["t_proc_ms"] = dim.t_proc_ms;
    j["tti_ms"] = dim.tti_ms;
    j["t_harq_ms"] = dim.t_harq_ms;
    j["n_min"] = dim.n_min;
    j["dci_bits"] = dim.dci_bits;
    j["buffer_units"] = dim.buffer_units;
    auto f = out.open("harq.json");
    f << j.dump(2) << "\n";
    std::cout << sc.name << ": T_HARQ " << fmt(dim.t_harq_ms) << " ms -> "
              << dim.n_min << " processes, DCI id " << dim.dci_bits << " bits\n";
    out.finish(sc.name, 0);
    return 0;
}

// --- feasibility ---------------------------------------------------------

int run_feasibility(const std::string& scenario_ref, const std::string& out_dir,
                    double separation_km) {
    const auto sc = resolve_scenario(scenario_ref);
    feas::ReportOptions opt;
    opt.max_ue_separation_km = separation_km;
    const auto report = feas::full_report(sc, opt);

    OutputDir out(out_dir);
    auto f = out.open("feasibility.json");
    f << feas::report_to_json(report);
    for (const auto& c : report.checks) {
        std::cout << (c.verdict == feas::Verdict::Pass ? "PASS " : "FAIL ")
                  << c.name << " (value " << fmt(c.scenario_value) << ' '
                  << c.value_unit << " vs " << fmt(c.constraint_value) << ' '
                  << c.constraint_unit << ")\n";
    }
    std::cout << report.n_pass << " pass, " << report.n_fail << " fail\n";
    out.finish(sc.name, 0);
    // FAIL verdicts are analysis results, not tool errors.
    return 0;
}

// --- simulate-ra ----------------------------------------------------------

int run_simulate_ra(const std::string& scenario_ref, const std::string& out_dir,
                    std::uint64_t seed, int n_ues, const std::string& mode,
                    int preamble_pool, double rar_window_ms,
                    double contention_ms, double loss, double core_delay_ms) {
    auto sc = resolve_scenario(scenario_ref);
    if (rar_window_ms > 0.0) sc.timers.rar_window_ms = rar_window_ms;
    if (contention_ms > 0.0) sc.timers.contention_resolution_ms = contention_ms;
    auto ch = sim::DelayChannel::from_scenario(sc);
    ch.loss_probability = loss;

    sim::RaConfig cfg;
    cfg.n_ues = n_ues;
    cfg.seed = seed;
    cfg.mode = mode == "cf" ? sim::RaMode::ContentionFree
                            : sim::RaMode::ContentionBased;
    cfg.preamble_pool = preamble_pool;
    cfg.core_delay_ms = core_delay_ms;
    const auto result = sim::simulate_ra(sc, ch, cfg);

    OutputDir out(out_dir);
    {
        auto f = out.open("ra_events.log");
        f << result.event_log;
    }
    ordered_json j;
    j["scenario"] = sc.name;
    j["seed"] = seed;
    j["success_rate"] = result.success_rate();
    ordered_json ues = ordered_json::array();
    for (const auto& o : result.outcomes) {
        ordered_json u;
        u["success"] = o.success;
        u["access_delay_s"] = o.access_delay_s;
        u["attempts"] = o.attempts;
        u["coverage_level"] = o.coverage_level;
        u["cause"] = o.cause == sim::RaFailureCause::None ? "none"
                     : o.cause == sim::RaFailureCause::RarWindowExpired
                         ? "rar_window_expired"
                         : "contention_unresolved";
        ues.push_back(u);
    }
    j["ues"] = ues;
    auto f = out.open("ra_outcomes.json");
    f << j.dump(2) << "\n";
    std::cout << "RA success rate " << fmt(result.success_rate()) << " over "
              << n_ues << " UE(s)\n";
    out.finish(sc.name, seed);
    return 0;
}

// --- simulate-harq ----------------------------------------------------------

int run_simulate_harq(const std::string& scenario_ref,
                      const std::string& out_dir, std::uint64_t seed,
                      int processes, double tti_ms, double duration_s,
                      double t_proc_ms, double loss, const std::string& mode,
                      int bundle) {
    const auto sc = resolve_scenario(scenario_ref);
    auto ch = sim::DelayChannel::from_scenario(sc);
    ch.loss_probability = loss;

    sim::HarqConfig cfg;
    cfg.n_processes = processes;
    cfg.tti_ms = tti_ms;
    cfg.duration_s = duration_s;
    cfg.seed = seed;
    cfg.t_proc_ms = t_proc_ms;
    cfg.mode = mode == "nbiot" ? sim::HarqMode::NbIotBundled
                               : sim::HarqMode::NrAsyncAdaptive;
    cfg.bundle_repetitions = bundle;
    const auto stats = sim::simulate_harq(sc, ch, cfg);

    OutputDir out(out_dir);
    {
        auto f = out.open("harq_events.log");
        f << stats.event_log;
    }
    ordered_json j;
    j["scenario"] = sc.name;
    j["seed"] = seed;
    j["utilization"] = stats.utilization;
    j["throughput_tb_s"] = stats.throughput_tb_s;
    j["tb_sent"] = stats.tb_sent;
    j["tb_acked"] = stats.tb_acked;
    j["tb_dropped"] = stats.tb_dropped;
    j["retransmissions"] = stats.retransmissions;
    j["max_in_flight"] = stats.max_in_flight;
    auto f = out.open("harq_stats.json");
    f << j.dump(2) << "\n";
    std::cout << "HARQ utilization " << fmt(stats.utilization) << ", "
              << stats.tb_acked << " TB acked\n";
    out.finish(sc.name, seed);
    return 0;
}

// --- waveform ----------------------------------------------------------------

void write_psd_csv(std::ofstream f, const wave::SpectrumEstimate& est,
                   double sample_rate) {
    f << "freq_norm,psd_db\n";
    for (std::size_t i = 0; i < est.freq.size(); ++i) {
        // Frequency normalized to the critically sampled rate so curves of
        // different oversampling overlay.
        f << fmt(est.freq[i] * sample_rate) << ',' << fmt(est.psd_db[i]) << "\n";
    }
}

void write_ccdf_csv(std::ofstream f, const std::vector<double>& papr_db) {
    f << "papr_db,ccdf\n";
    for (const auto& [papr, ccdf] : wave::papr_ccdf_curve(papr_db)) {
        f << fmt(papr) << ',' << fmt(ccdf) << "\n";
    }
}

int run_waveform(const std::string& out_dir, std::uint64_t seed,
                 std::size_t psd_symbols, std::size_t papr_symbols,
                 const std::vector<std::string>& sweeps, bool dump_iq) {
    std::vector<double> ibos = {20.0};
    for (const auto& text : sweeps) {
        const Sweep s = parse_sweep(text);
        if (s.key != "ibo_db") {
            throw ValidationError("waveform sweeps support ibo_db, got '" +
                                  s.key + "'");
        }
        ibos = s.values;
    }

    // Sweep points are independent; per-run determinism comes from the
    // derived seed (base seed + index), so the fan-out order is irrelevant.
    std::vector<wave::StudyResult> results(ibos.size());
    std::vector<std::uint64_t> run_seeds(ibos.size());
#pragma omp parallel for schedule(dynamic)
    for (long long run = 0; run < static_cast<long long>(ibos.size()); ++run) {
        const auto idx = static_cast<std::size_t>(run);
        wave::StudyConfig cfg;
        cfg.seed = seed + idx;
        cfg.psd_symbols = psd_symbols;
        cfg.papr_symbols = papr_symbols;
        cfg.twta.ibo_db = ibos[idx];
        run_seeds[idx] = cfg.seed;
        results[idx] = wave::run_waveform_study(cfg);
    }

    OutputDir out(out_dir);
    ordered_json all = ordered_json::array();
    for (std::size_t run = 0; run < ibos.size(); ++run) {
        const auto& r = results[run];
        char prefix[48];
        std::snprintf(prefix, sizeof(prefix), "ibo%g", ibos[run]);
        write_psd_csv(out.open(std::string(prefix) + "_psd_ofdm_linear.csv"),
                      r.ofdm_linear, 1.0);
        write_psd_csv(out.open(std::string(prefix) + "_psd_fofdm_linear.csv"),
                      r.fofdm_linear, 1.0);
        write_psd_csv(out.open(std::string(prefix) + "_psd_ofdm_twta.csv"),
                      r.ofdm_twta, 4.0);
        write_psd_csv(out.open(std::string(prefix) + "_psd_fofdm_twta.csv"),
                      r.fofdm_twta, 4.0);
        write_ccdf_csv(out.open(std::string(prefix) + "_papr_ofdm.csv"),
                       r.papr_ofdm_db);
        write_ccdf_csv(out.open(std::string(prefix) + "_papr_fofdm.csv"),
                       r.papr_fofdm_db);

        ordered_json j;
        j["ibo_db"] = ibos[run];
        j["seed"] = run_seeds[run];
        j["oobe_ofdm_linear_db"] = r.ofdm_linear.oobe_suppression_db;
        j["oobe_fofdm_linear_db"] = r.fofdm_linear.oobe_suppression_db;
        j["oobe_ofdm_twta_db"] = r.ofdm_twta.oobe_suppression_db;
        j["oobe_fofdm_twta_db"] = r.fofdm_twta.oobe_suppression_db;
        j["oobe_gap_twta_db"] = r.oobe_gap_twta_db();
        j["papr_ofdm_1e3_db"] = r.papr_ofdm_1e3_db;
        j["papr_fofdm_1e3_db"] = r.papr_fofdm_1e3_db;
        all.push_back(j);

        std::cout << "IBO " << ibos[run] << " dB: OOBE ofdm "
                  << fmt(r.ofdm_linear.oobe_suppression_db) << " dB, fofdm "
                  << fmt(r.fofdm_linear.oobe_suppression_db)
                  << " dB, twta gap " << fmt(r.oobe_gap_twta_db()) << " dB\n";
    }
    if (dump_iq) {
        wave::OfdmConfig small;
        small.n_symbols = 16;
        const auto buf = wave::generate_ofdm(small, seed);
        auto f = out.open("ofdm_16sym.iq");
        io::write_iq(f, buf);
    }
    auto f = out.open("waveform_summary.json");
    f << all.dump(2) << "\n";
    out.finish("waveform_reference_design", seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ntnlab: NR-over-satellite feasibility lab (geometry, MAC timers, "
        "waveforms)"};
    app.require_subcommand(1);

    std::string scenario = "embb_geo";
    std::string out_dir;
    std::string format = "csv";
    std::uint64_t seed = 0;

    // geometry
    auto* geo = app.add_subcommand("geometry", "slant ranges, delays and RTT");
    geo->add_option("--scenario", scenario, "builtin name or JSON path");
    geo->add_option("--out", out_dir, "output directory");
    geo->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    // doppler
    auto* dop = app.add_subcommand("doppler", "pass Doppler and differential Doppler");
    std::vector<double> separations;
    std::vector<std::string> dop_sweeps;
    double step_ms = 10.0;
    dop->add_option("--scenario", scenario, "builtin name or JSON path");
    dop->add_option("--out", out_dir, "output directory");
    dop->add_option("--separations-km", separations, "UE separations (default 40,200)");
    dop->add_option("--sweep", dop_sweeps,
                    "k=v1,v2,... over h_sat_km or separation_km");
    dop->add_option("--step-ms", step_ms, "pass sampling step")->check(CLI::PositiveNumber);

    // ta
    auto* ta = app.add_subcommand("ta", "timing advance quantization table");
    ta->add_option("--out", out_dir, "output directory");

    // harq
    auto* harq = app.add_subcommand("harq", "HARQ process dimensioning");
    double t_proc_ms = 5.0;
    double tti_ms = 0.0;
    harq->add_option("--scenario", scenario, "builtin name or JSON path");
    harq->add_option("--out", out_dir, "output directory");
    harq->add_option("--t-proc-ms", t_proc_ms,
                     "per-leg processing allowance (5 reproduces the GEO "
                     "dimensioning; 3 is the terrestrial decomposition)");
    harq->add_option("--tti-ms", tti_ms, "override the scenario numerology TTI");

    // feasibility
    auto* feas_cmd = app.add_subcommand("feasibility", "PASS/FAIL report");
    double separation = 200.0;
    feas_cmd->add_option("--scenario", scenario, "builtin name or JSON path");
    feas_cmd->add_option("--out", out_dir, "output directory");
    feas_cmd->add_option("--separation-km", separation, "max UE separation");

    // simulate-ra
    auto* sra = app.add_subcommand("simulate-ra", "event-driven random access");
    int n_ues = 1;
    std::string ra_mode = "cb";
    int preamble_pool = 64;
    double rar_override = 0.0, cr_override = 0.0, loss = 0.0;
    sra->add_option("--scenario", scenario, "builtin name or JSON path");
    sra->add_option("--out", out_dir, "output directory");
    sra->add_option("--seed", seed, "simulation seed")->required();
    sra->add_option("--ues", n_ues, "number of UEs")->check(CLI::PositiveNumber);
    sra->add_option("--mode", ra_mode, "cb|cf")
        ->check(CLI::IsMember({"cb", "cf"}));
    sra->add_option("--preamble-pool", preamble_pool, "preamble pool size");
    sra->add_option("--rar-window-ms", rar_override, "override RAR window");
    sra->add_option("--contention-ms", cr_override, "override contention timer");
    sra->add_option("--loss", loss, "per-message loss probability");
    double core_delay = 0.0;
    sra->add_option("--core-delay-ms", core_delay,
                    "extra core-network turnaround on msg3/msg4");

    // simulate-harq
    auto* sharq = app.add_subcommand("simulate-harq", "stop-and-wait HARQ");
    int processes = 16;
    double sim_tti = 1.0, duration = 10.0, harq_loss = 0.0;
    std::string harq_mode = "nr";
    int bundle = 1;
    sharq->add_option("--scenario", scenario, "builtin name or JSON path");
    sharq->add_option("--out", out_dir, "output directory");
    sharq->add_option("--seed", seed, "simulation seed")->required();
    sharq->add_option("--processes", processes, "parallel HARQ processes")
        ->check(CLI::PositiveNumber);
    sharq->add_option("--tti-ms", sim_tti, "TTI")->check(CLI::PositiveNumber);
    sharq->add_option("--duration-s", duration, "simulated time")
        ->check(CLI::PositiveNumber);
    sharq->add_option("--t-proc-ms", t_proc_ms, "per-leg turnaround");
    sharq->add_option("--loss", harq_loss, "TB loss probability");
    sharq->add_option("--mode", harq_mode, "nr|nbiot")
        ->check(CLI::IsMember({"nr", "nbiot"}));
    sharq->add_option("--bundle", bundle, "NB-IoT bundle repetitions");

    // waveform
    auto* wf = app.add_subcommand("waveform", "CP-OFDM vs f-OFDM through a TWTA");
    std::size_t psd_symbols = 1024, papr_symbols = 10000;
    std::vector<std::string> wf_sweeps;
    bool dump_iq = false;
    wf->add_option("--out", out_dir, "output directory");
    wf->add_option("--seed", seed, "payload seed")->required();
    wf->add_option("--symbols", psd_symbols, "symbols for the PSD runs");
    wf->add_option("--papr-symbols", papr_symbols, "symbols for the PAPR CCDF");
    wf->add_option("--sweep", wf_sweeps, "k=v1,v2,... over ibo_db (default 20)");
    wf->add_flag("--dump-iq", dump_iq, "also dump a short IQ capture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (out_dir.empty()) {
            out_dir = "out/" + app.get_subcommands().front()->get_name();
        }
        if (geo->parsed()) return run_geometry(scenario, out_dir, format);
        if (dop->parsed()) {
            return run_doppler(scenario, out_dir, separations, step_ms,
                               dop_sweeps);
        }
        if (ta->parsed()) return run_ta(out_dir);
        if (harq->parsed()) return run_harq(scenario, out_dir, t_proc_ms, tti_ms);
        if (feas_cmd->parsed()) {
            return run_feasibility(scenario, out_dir, separation);
        }
        if (sra->parsed()) {
            return run_simulate_ra(scenario, out_dir, seed, n_ues, ra_mode,
                                   preamble_pool, rar_override, cr_override,
                                   loss, core_delay);
        }
        if (sharq->parsed()) {
            return run_simulate_harq(scenario, out_dir, seed, processes, sim_tti,
                                     duration, t_proc_ms, harq_loss, harq_mode,
                                     bundle);
        }
        if (wf->parsed()) {
            return run_waveform(out_dir, seed, psd_symbols, papr_symbols,
                                wf_sweeps, dump_iq);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
