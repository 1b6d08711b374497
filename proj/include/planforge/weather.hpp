#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/model.hpp"

namespace planforge {

inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr std::size_t kDaysPerYear = 365;

struct WeatherHour {
    double dry_bulb = 0.0;  // degC
    double dni = 0.0;       // W/m2
    double dhi = 0.0;       // W/m2

    friend bool operator==(const WeatherHour&, const WeatherHour&) = default;
};

struct WeatherYear {
    std::string name;
    Location location;
    int jan1_weekday = 0;  // 0 = Monday
    std::vector<WeatherHour> hours;

    friend bool operator==(const WeatherYear&, const WeatherYear&) = default;
};

struct WeatherError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws WeatherError; messages name the offending line.
WeatherYear parse_epw(std::string_view text);
WeatherYear load_epw(const std::string& path);

// EPW document with the eight header lines and 8760 records; fields not modeled are written as EPW missing codes.
std::string format_epw(const WeatherYear& w);

std::vector<std::string> weather_issues(const WeatherYear& w);

// Daily mean dry-bulb temperatures, 365 values.
std::vector<double> daily_means(const WeatherYear& w);

// Smooth annual and daily cycles; clear-sky-like radiation shaped by solar altitude.
struct SyntheticClimate {
    double annual_mean = 15.0;
    double annual_amplitude = 8.0;  // warmest around day 200
    double daily_amplitude = 5.0;   // warmest at 15:00
    double peak_dni = 800.0;
    double peak_dhi = 120.0;
};
WeatherYear synthetic_weather(const Location& loc, const SyntheticClimate& c = {});

// Every hour at one temperature, no radiation.
WeatherYear constant_weather(const Location& loc, double dry_bulb);

}  // namespace planforge
