#pragma once

#include <vector>

#include "planforge/model.hpp"

namespace planforge {

struct SunPosition {
    double altitude = 0.0;  // degrees above the horizon
    double azimuth = 0.0;   // degrees clockwise from north
};

// hour is local standard clock time in hours (12.5 = 12:30).
SunPosition sun_position(double latitude, double longitude, double timezone, int day_of_year, double hour);

// Mid-hour sun positions for the 8760 hours of a year.
std::vector<SunPosition> annual_sun_path(const Location& loc);

// Direct part dni * max(0, cos incidence) on a vertical surface; 0 with the sun below the horizon.
double incident_direct(const SunPosition& sun, double dni, double surface_azimuth);
// Isotropic half-sky share of the diffuse horizontal irradiance.
inline double incident_diffuse(double dhi) { return 0.5 * dhi; }
double incident_irradiance(const SunPosition& sun, double dni, double dhi, double surface_azimuth);

// Fraction of the window's direct beam blocked by its overhang and fins.
// relative_azimuth is sun azimuth minus facade azimuth, positive with the sun to the right of the outward normal.
double shading_fraction(const Opening& window, double sun_altitude, double relative_azimuth);
double shading_fraction(const Opening& window, const SunPosition& sun, double surface_azimuth);

}  // namespace planforge
