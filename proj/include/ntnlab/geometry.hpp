#pragma once

#include <iosfwd>
#include <vector>

#include "ntnlab/constants.hpp"
#include "ntnlab/scenario.hpp"

namespace ntnlab::geometry {

// Line-of-sight distance from a ground terminal to the satellite at the
// given elevation angle, on a spherical Earth:
//   d(theta) = sqrt(R^2 sin^2 theta + h^2 + 2 R h) - R sin theta
// Equals h_sat_km at zenith. Throws std::domain_error outside h > 0,
// elevation in [0, 90].
double slant_range_km(double h_sat_km, double elevation_deg,
                      const PhysicalConstants& pc = {});

// Propagation delay over a path, in milliseconds.
double one_way_delay_ms(double range_km, const PhysicalConstants& pc = {});

struct LinkGeometry {
    double h_sat_km = 0.0;
    double elevation_deg = 0.0;
    double slant_range_km = 0.0;
    double one_way_delay_ms = 0.0;
};

LinkGeometry link_geometry(double h_sat_km, double elevation_deg,
                           const PhysicalConstants& pc = {});

struct RoundTrip {
    double one_way_ms = 0.0;
    double rtt_ms = 0.0;
};

// End-to-end delay for a scenario's worst-case geometry. Transparent
// payloads (A1/A3) add the gateway leg at the GW elevation to the service
// leg at the minimum receiver elevation; regenerative payloads (A2/A4)
// terminate on board, so only the service leg counts. rtt = 2 * one_way.
RoundTrip round_trip_time(const ScenarioConfig& scenario,
                          const PhysicalConstants& pc = {});

// Circular-orbit angular velocity sqrt(G M_E / (R_E + h)^3), in rad/s.
double orbital_angular_velocity_rad_s(double h_sat_km,
                                      const PhysicalConstants& pc = {});

// One satellite pass over a set of UEs placed on the ground track.
// Offsets are along-track distances behind the reference point; the time
// origin is the reference UE's zenith crossing, and the pass spans the
// maximal interval where the reference UE sees the satellite at or above
// min_elevation_deg. UE 0 is the reference for differential quantities.
struct PassGeometry {
    double h_sat_km = 600.0;
    std::vector<double> ue_track_offsets_km = {0.0};
    double min_elevation_deg = 10.0;
    double time_step_s = 0.010;
    double carrier_hz = 2.2e9;

    void validate() const;  // throws std::invalid_argument
};

struct ElevationSeries {
    std::vector<double> t_s;                          // sample times
    std::vector<std::vector<double>> elevation_deg;   // [ue][sample]
};

// Elevation profiles for every UE over the pass. Empty if the reference UE
// never reaches min_elevation_deg.
ElevationSeries elevation_series(const PassGeometry& pass,
                                 const PhysicalConstants& pc = {});

// Central angle between a UE and the sub-satellite point at time t
// (signed; zero at the UE's own zenith crossing).
double central_angle_rad(const PassGeometry& pass, std::size_t ue, double t_s,
                         const PhysicalConstants& pc = {});

// Elevation (deg) and slant range (km) of one UE at time t.
double elevation_at(const PassGeometry& pass, std::size_t ue, double t_s,
                    const PhysicalConstants& pc = {});
double slant_range_at(const PassGeometry& pass, std::size_t ue, double t_s,
                      const PhysicalConstants& pc = {});

// Doppler shift magnitude f_c * w_sat * R_E * cos(elevation) / c, signed
// positive while the satellite approaches (before its zenith pass).
double doppler_shift_hz(double carrier_hz, double h_sat_km,
                        double elevation_deg, bool approaching,
                        const PhysicalConstants& pc = {});

// Doppler of one UE at time t within a pass (sign from geometry).
double doppler_at(const PassGeometry& pass, std::size_t ue, double t_s,
                  const PhysicalConstants& pc = {});

// Doppler from terminal mobility alone: v * f_c / c.
double mobility_doppler_hz(double speed_kmh, double carrier_hz,
                           const PhysicalConstants& pc = {});

// Per-UE Doppler and differential Doppler against the reference UE over a
// pass. f_di(t) = f_d_common(t) + delta_f_di(t) with UE 0 as the common
// (reference) part.
struct DopplerSeries {
    std::vector<double> t_s;
    std::vector<std::vector<double>> elevation_deg;    // [ue][sample]
    std::vector<std::vector<double>> doppler_hz;       // [ue][sample]
    std::vector<double> common_doppler_hz;             // == doppler_hz[0]
    std::vector<std::vector<double>> diff_doppler_hz;  // [ue][sample]

    std::size_t n_ues() const { return doppler_hz.size(); }
};

// Requires at least two UEs in the pass.
DopplerSeries differential_doppler(const PassGeometry& pass,
                                   const PhysicalConstants& pc = {});

// Maximum |f_d(ue) - f_d(reference)| over the visible pass for two UEs the
// given distance apart on the ground track.
double max_differential_doppler_hz(double separation_km, double h_sat_km,
                                   double carrier_hz,
                                   double min_elevation_deg = 10.0,
                                   const PhysicalConstants& pc = {});

// Maximum slant-range difference |d_ue(t) - d_ref(t)| over the pass, plus
// the fraction of pass samples where the difference stays within a budget.
struct RangeDifferenceStats {
    double max_abs_km = 0.0;
    double fraction_within_budget = 1.0;
};

RangeDifferenceStats max_range_difference_km(double separation_km,
                                             double h_sat_km,
                                             double budget_km,
                                             double min_elevation_deg = 10.0,
                                             const PhysicalConstants& pc = {});

// CSV export, one row per UE per sample:
// t_s,ue_index,elevation_deg,doppler_hz,diff_doppler_hz
void write_doppler_csv(std::ostream& out, const DopplerSeries& series);

}  // namespace ntnlab::geometry
