#include "ntnlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ntnlab::geometry {

namespace {
constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

double slant_range_km(double h_sat_km, double elevation_deg,
                      const PhysicalConstants& pc) {
    if (!(h_sat_km > 0.0)) {
        throw std::domain_error("slant_range: h_sat_km must be > 0");
    }
    if (elevation_deg < 0.0 || elevation_deg > 90.0) {
        throw std::domain_error("slant_range: elevation_deg must be in [0, 90]");
    }
    const double re = pc.earth_radius_km;
    const double s = std::sin(deg2rad(elevation_deg));
    return std::sqrt(re * re * s * s + h_sat_km * h_sat_km + 2.0 * re * h_sat_km) -
           re * s;
}

double one_way_delay_ms(double range_km, const PhysicalConstants& pc) {
    if (range_km < 0.0) {
        throw std::domain_error("one_way_delay: range_km must be >= 0");
    }
    return range_km / pc.c_km_per_s() * 1000.0;
}

LinkGeometry link_geometry(double h_sat_km, double elevation_deg,
                           const PhysicalConstants& pc) {
    LinkGeometry g;
    g.h_sat_km = h_sat_km;
    g.elevation_deg = elevation_deg;
    g.slant_range_km = slant_range_km(h_sat_km, elevation_deg, pc);
    g.one_way_delay_ms = one_way_delay_ms(g.slant_range_km, pc);
    return g;
}

RoundTrip round_trip_time(const ScenarioConfig& scenario,
                          const PhysicalConstants& pc) {
    const double service_ms =
        one_way_delay_ms(slant_range_km(scenario.h_sat_km,
                                        scenario.min_elevation_rx_deg, pc), pc);
    double one_way = service_ms;
    if (!scenario.regenerative()) {
        one_way += one_way_delay_ms(
            slant_range_km(scenario.h_sat_km, scenario.elevation_gw_deg, pc), pc);
    }
    return RoundTrip{one_way, 2.0 * one_way};
}

double orbital_angular_velocity_rad_s(double h_sat_km,
                                      const PhysicalConstants& pc) {
    if (!(h_sat_km > 0.0)) {
        throw std::domain_error("orbital_angular_velocity: h_sat_km must be > 0");
    }
    const double r_m = (pc.earth_radius_km + h_sat_km) * 1000.0;
    return std::sqrt(pc.g_nm2_kg2 * pc.earth_mass_kg / (r_m * r_m * r_m));
}

void PassGeometry::validate() const {
    if (!(h_sat_km > 0.0)) {
        throw std::invalid_argument("pass.h_sat_km must be > 0");
    }
    if (ue_track_offsets_km.empty()) {
        throw std::invalid_argument("pass needs at least one UE");
    }
    for (double x : ue_track_offsets_km) {
        if (x < 0.0) {
            throw std::invalid_argument("pass.ue_track_offsets_km must be >= 0");
        }
    }
    if (!(min_elevation_deg > 0.0) || min_elevation_deg > 90.0) {
        throw std::invalid_argument("pass.min_elevation_deg must be in (0, 90]");
    }
    if (!(time_step_s > 0.0)) {
        throw std::invalid_argument("pass.time_step_s must be > 0");
    }
    if (!(carrier_hz > 0.0)) {
        throw std::invalid_argument("pass.carrier_hz must be > 0");
    }
}

namespace {

// Elevation angle for a central angle gamma between terminal and
// sub-satellite point. Even in gamma; exactly 90 deg at gamma = 0.
double elevation_from_gamma(double gamma_rad, double h_sat_km,
                            const PhysicalConstants& pc) {
    const double k = pc.earth_radius_km / (pc.earth_radius_km + h_sat_km);
    return rad2deg(std::atan2(std::cos(gamma_rad) - k, std::abs(std::sin(gamma_rad))));
}

double range_from_gamma(double gamma_rad, double h_sat_km,
                        const PhysicalConstants& pc) {
    const double re = pc.earth_radius_km;
    const double r = re + h_sat_km;
    return std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(gamma_rad));
}

// Central angle at which the elevation drops to min_elevation. From the
// spherical triangle: gamma = acos(R/(R+h) cos theta) - theta.
double gamma_at_elevation(double elevation_deg, double h_sat_km,
                          const PhysicalConstants& pc) {
    const double theta = deg2rad(elevation_deg);
    const double k = pc.earth_radius_km / (pc.earth_radius_km + h_sat_km);
    return std::acos(k * std::cos(theta)) - theta;
}

}  // namespace

double central_angle_rad(const PassGeometry& pass, std::size_t ue, double t_s,
                         const PhysicalConstants& pc) {
    const double w = orbital_angular_velocity_rad_s(pass.h_sat_km, pc);
    return w * t_s - pass.ue_track_offsets_km.at(ue) / pc.earth_radius_km;
}

double elevation_at(const PassGeometry& pass, std::size_t ue, double t_s,
                    const PhysicalConstants& pc) {
    return elevation_from_gamma(central_angle_rad(pass, ue, t_s, pc),
                                pass.h_sat_km, pc);
}

double slant_range_at(const PassGeometry& pass, std::size_t ue, double t_s,
                      const PhysicalConstants& pc) {
    return range_from_gamma(central_angle_rad(pass, ue, t_s, pc),
                            pass.h_sat_km, pc);
}

double doppler_shift_hz(double carrier_hz, double h_sat_km,
                        double elevation_deg, bool approaching,
                        const PhysicalConstants& pc) {
    const double w = orbital_angular_velocity_rad_s(h_sat_km, pc);
    const double mag = carrier_hz * w * (pc.earth_radius_km * 1000.0) *
                       std::cos(deg2rad(elevation_deg)) / pc.c_mps;
    return approaching ? mag : -mag;
}

double doppler_at(const PassGeometry& pass, std::size_t ue, double t_s,
                  const PhysicalConstants& pc) {
    const double gamma = central_angle_rad(pass, ue, t_s, pc);
    const double elev = elevation_from_gamma(gamma, pass.h_sat_km, pc);
    return doppler_shift_hz(pass.carrier_hz, pass.h_sat_km, elev,
                            /*approaching=*/gamma < 0.0, pc);
}

double mobility_doppler_hz(double speed_kmh, double carrier_hz,
                           const PhysicalConstants& pc) {
    if (speed_kmh < 0.0) {
        throw std::domain_error("mobility_doppler: speed must be >= 0");
    }
    const double v_mps = speed_kmh / 3.6;
    return v_mps * carrier_hz / pc.c_mps;
}

ElevationSeries elevation_series(const PassGeometry& pass,
                                 const PhysicalConstants& pc) {
    pass.validate();
    ElevationSeries out;
    out.elevation_deg.resize(pass.ue_track_offsets_km.size());

    const double w = orbital_angular_velocity_rad_s(pass.h_sat_km, pc);
    const double gamma_lim =
        gamma_at_elevation(pass.min_elevation_deg, pass.h_sat_km, pc);
    if (!(gamma_lim > 0.0)) {
        return out;  // min elevation unreachable
    }
    // Reference UE (offset treated as zero epoch shift for UE 0's own offset):
    // the reference is UE 0, whose zenith crossing defines t = 0 only when its
    // offset is 0. In general its zenith is at t0 = offset/(R_E w); the pass
    // window brackets the reference UE's visibility.
    const double t0 = pass.ue_track_offsets_km[0] / (pc.earth_radius_km * w);
    const double t_start = t0 - gamma_lim / w;
    const double t_end = t0 + gamma_lim / w;

    for (double t = t_start; t <= t_end + 1e-12; t += pass.time_step_s) {
        out.t_s.push_back(t);
    }
    for (std::size_t ue = 0; ue < pass.ue_track_offsets_km.size(); ++ue) {
        auto& col = out.elevation_deg[ue];
        col.resize(out.t_s.size());
        for (std::size_t i = 0; i < out.t_s.size(); ++i) {
            col[i] = elevation_at(pass, ue, out.t_s[i], pc);
        }
    }
    return out;
}

DopplerSeries differential_doppler(const PassGeometry& pass,
                                   const PhysicalConstants& pc) {
    pass.validate();
    if (pass.ue_track_offsets_km.size() < 2) {
        throw std::invalid_argument("differential_doppler needs at least 2 UEs");
    }
    DopplerSeries out;
    ElevationSeries elev = elevation_series(pass, pc);
    out.t_s = std::move(elev.t_s);
    out.elevation_deg = std::move(elev.elevation_deg);

    const std::size_t n_ues = pass.ue_track_offsets_km.size();
    const std::size_t n = out.t_s.size();
    out.doppler_hz.assign(n_ues, std::vector<double>(n, 0.0));
    out.diff_doppler_hz.assign(n_ues, std::vector<double>(n, 0.0));

    for (std::size_t ue = 0; ue < n_ues; ++ue) {
        for (std::size_t i = 0; i < n; ++i) {
            out.doppler_hz[ue][i] = doppler_at(pass, ue, out.t_s[i], pc);
        }
    }
    out.common_doppler_hz = out.doppler_hz[0];
    for (std::size_t ue = 0; ue < n_ues; ++ue) {
        for (std::size_t i = 0; i < n; ++i) {
            out.diff_doppler_hz[ue][i] =
                out.doppler_hz[ue][i] - out.common_doppler_hz[i];
        }
    }
    return out;
}

double max_differential_doppler_hz(double separation_km, double h_sat_km,
                                   double carrier_hz, double min_elevation_deg,
                                   const PhysicalConstants& pc) {
    if (separation_km < 0.0) {
        throw std::domain_error("max_differential_doppler: separation must be >= 0");
    }
    if (separation_km == 0.0) {
        return 0.0;
    }
    PassGeometry pass;
    pass.h_sat_km = h_sat_km;
    pass.ue_track_offsets_km = {0.0, separation_km};
    pass.min_elevation_deg = min_elevation_deg;
    pass.carrier_hz = carrier_hz;
    DopplerSeries series = differential_doppler(pass, pc);
    double best = 0.0;
    for (double v : series.diff_doppler_hz[1]) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

RangeDifferenceStats max_range_difference_km(double separation_km,
                                             double h_sat_km, double budget_km,
                                             double min_elevation_deg,
                                             const PhysicalConstants& pc) {
    PassGeometry pass;
    pass.h_sat_km = h_sat_km;
    pass.ue_track_offsets_km = {0.0, separation_km};
    pass.min_elevation_deg = min_elevation_deg;
    ElevationSeries elev = elevation_series(pass, pc);

    RangeDifferenceStats stats;
    if (elev.t_s.empty()) {
        return stats;
    }
    std::size_t within = 0;
    for (double t : elev.t_s) {
        const double diff =
            std::abs(slant_range_at(pass, 1, t, pc) - slant_range_at(pass, 0, t, pc));
        stats.max_abs_km = std::max(stats.max_abs_km, diff);
        if (diff <= budget_km) {
            ++within;
        }
    }
    stats.fraction_within_budget =
        static_cast<double>(within) / static_cast<double>(elev.t_s.size());
    return stats;
}

void write_doppler_csv(std::ostream& out, const DopplerSeries& series) {
    out << "t_s,ue_index,elevation_deg,doppler_hz,diff_doppler_hz\n";
    char line[256];
    for (std::size_t ue = 0; ue < series.n_ues(); ++ue) {
        for (std::size_t i = 0; i < series.t_s.size(); ++i) {
            std::snprintf(line, sizeof(line), "%.6f,%zu,%.9g,%.9g,%.9g\n",
                          series.t_s[i], ue, series.elevation_deg[ue][i],
                          series.doppler_hz[ue][i], series.diff_doppler_hz[ue][i]);
            out << line;
        }
    }
}

}  // namespace ntnlab::geometry
