#pragma once

namespace ntnlab {

// Physical constants used throughout the link-geometry math. The defaults
// are the rounded values that reproduce the reference delay/Doppler tables
// (an equatorial Earth radius and c = 3.0e8 m/s); exact() swaps in the
// CODATA speed of light for users who prefer it.
struct PhysicalConstants {
    double c_mps = 3.0e8;              // speed of light [m/s]
    double g_nm2_kg2 = 6.67e-11;       // gravitational constant [N m^2 / kg^2]
    double earth_mass_kg = 5.98e24;    // [kg]
    double earth_radius_km = 6378.0;   // equatorial radius [km]

    static PhysicalConstants exact() {
        PhysicalConstants pc;
        pc.c_mps = 2.99792458e8;
        return pc;
    }

    double c_km_per_s() const { return c_mps / 1000.0; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

}  // namespace ntnlab
