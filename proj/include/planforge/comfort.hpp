#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/weather.hpp"

namespace planforge {

enum class ComfortKind : unsigned char { Fixed, EN15251, ASHRAE55 };

struct ComfortModel {
    ComfortKind kind = ComfortKind::EN15251;
    double lower = 20.0;  // Fixed
    double upper = 26.0;  // Fixed
    int category = 2;     // EN15251: 1, 2 or 3
    int acceptability = 80;  // ASHRAE55: 80 or 90

    static ComfortModel fixed(double lower, double upper) { return {ComfortKind::Fixed, lower, upper, 2, 80}; }
    static ComfortModel en15251(int category) { return {ComfortKind::EN15251, 20.0, 26.0, category, 80}; }
    static ComfortModel ashrae55(int acceptability) { return {ComfortKind::ASHRAE55, 20.0, 26.0, 2, acceptability}; }

    friend bool operator==(const ComfortModel&, const ComfortModel&) = default;
};

std::vector<std::string> comfort_issues(const ComfortModel& m);

// "fixed:20:26", "en15251:I|II|III", "ashrae55:80|90"; throws std::invalid_argument.
ComfortModel comfort_from_string(std::string_view s);
std::string comfort_to_string(const ComfortModel& m);

struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

Band comfort_band(const ComfortModel& m, double running_mean);

inline constexpr double kRunningMeanAlpha = 0.8;

// Exponentially weighted running mean of daily mean outdoor temperature for days 1..365,
// seeded on day 1 with the mean of the seven preceding days, wrapping the year.
std::vector<double> running_means(const WeatherYear& w);
double running_mean(const WeatherYear& w, int day);

struct SpaceDiscomfort {
    std::string space_id;
    double heating_dh = 0.0;  // K h
    double cooling_dh = 0.0;  // K h
};

struct DiscomfortResult {
    std::vector<SpaceDiscomfort> spaces;
    double heating_total = 0.0;
    double cooling_total = 0.0;
};

struct SimResult;

// Hourly comfort limits for the year under model m.
void hourly_bands(const ComfortModel& m, const WeatherYear& w, std::vector<double>& lower, std::vector<double>& upper);

DiscomfortResult degree_hours(const SimResult& r, const ComfortModel& m, const WeatherYear& w);
double discomfort_objective(const DiscomfortResult& d, double w_heat, double w_cool);

}  // namespace planforge
