#include "planforge/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "planforge/weather.hpp"

namespace planforge {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap180(double a) {
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0.0) a += 360.0;
    return a - 180.0;
}

}  // namespace

SunPosition sun_position(double latitude, double longitude, double timezone, int day_of_year, double hour) {
    const double n = static_cast<double>(day_of_year);
    const double decl = 23.45 * std::sin(kDeg * 360.0 * (284.0 + n) / 365.0);
    const double b = kDeg * 360.0 * (n - 81.0) / 364.0;
    const double eot = 9.87 * std::sin(2.0 * b) - 7.53 * std::cos(b) - 1.5 * std::sin(b);  // minutes
    const double solar_time = hour + (4.0 * (longitude - 15.0 * timezone) + eot) / 60.0;
    const double omega = kDeg * 15.0 * (solar_time - 12.0);
    const double phi = kDeg * latitude;
    const double delta = kDeg * decl;

    const double sin_alt = std::sin(phi) * std::sin(delta) + std::cos(phi) * std::cos(delta) * std::cos(omega);
    SunPosition s;
    s.altitude = std::asin(std::clamp(sin_alt, -1.0, 1.0)) / kDeg;
    const double y = -std::cos(delta) * std::sin(omega);
    const double x = std::sin(delta) * std::cos(phi) - std::cos(delta) * std::sin(phi) * std::cos(omega);
    double az = std::atan2(y, x) / kDeg;
    if (az < 0.0) az += 360.0;
    s.azimuth = az;
    return s;
}

std::vector<SunPosition> annual_sun_path(const Location& loc) {
    std::vector<SunPosition> out(kHoursPerYear);
    for (std::size_t h = 0; h < kHoursPerYear; ++h) {
        out[h] = sun_position(loc.latitude, loc.longitude, loc.timezone, static_cast<int>(h / 24) + 1,
                              static_cast<double>(h % 24) + 0.5);
    }
    return out;
}

double incident_direct(const SunPosition& sun, double dni, double surface_azimuth) {
    if (sun.altitude <= 0.0) return 0.0;
    const double cos_theta = std::cos(kDeg * sun.altitude) * std::cos(kDeg * (sun.azimuth - surface_azimuth));
    return dni * std::max(0.0, cos_theta);
}

double incident_irradiance(const SunPosition& sun, double dni, double dhi, double surface_azimuth) {
    return incident_direct(sun, dni, surface_azimuth) + incident_diffuse(dhi);
}

double shading_fraction(const Opening& window, double sun_altitude, double relative_azimuth) {
    const double rel = wrap180(relative_azimuth);
    const double oh = window.overhang_depth;
    const double fin = rel > 0.0 ? window.fin_depth_right : window.fin_depth_left;
    if (oh <= 0.0 && fin <= 0.0) return 0.0;
    if (sun_altitude <= 0.0 || std::abs(rel) >= 90.0) return 0.0;
    const double w = window.width, h = window.height;
    if (w <= 0.0 || h <= 0.0) return 0.0;
    const double tan_profile = std::tan(kDeg * sun_altitude) / std::cos(kDeg * rel);
    const double hs = std::min(h, std::max(0.0, oh) * tan_profile);
    const double ws = std::min(w, std::max(0.0, fin) * std::abs(std::tan(kDeg * rel)));
    const double shaded = w * hs + ws * h - ws * hs;
    return std::clamp(shaded / (w * h), 0.0, 1.0);
}

double shading_fraction(const Opening& window, const SunPosition& sun, double surface_azimuth) {
    return shading_fraction(window, sun.altitude, wrap180(sun.azimuth - surface_azimuth));
}

}  // namespace planforge
