#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "planforge/comfort.hpp"
#include "planforge/model.hpp"
#include "planforge/weather.hpp"

namespace planforge {

inline constexpr double kAirHeatCapacity = 1206.0;  // rho * c_p of air, J/(m3 K)
inline constexpr double kInsideSurfaceResistance = 0.13;
inline constexpr double kOutsideSurfaceResistance = 0.04;
inline constexpr double kComfortVentThreshold = 24.0;

// W/(m2 K) of an opaque assembly including surface resistances; glazing returns its own U.
double assembly_u_value(const Assembly& a);

// Hourly fractions over one week starting Monday 00:00.
struct Schedule {
    std::array<double, 168> fractions{};

    static Schedule constant(double f);
    // f during [from, to) every day (hours 0..24, wrapping past midnight when from > to).
    static Schedule daily(double from, double to, double f = 1.0);

    double at(std::size_t hour_of_year, int jan1_weekday) const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ZoneUse {
    double occupants = 0.0;
    double activity_gain = 0.0;  // W per person
    double equipment = 0.0;      // W/m2
    double lighting = 0.0;       // W/m2
    Schedule occupancy;
    Schedule equipment_schedule;
    Schedule lighting_schedule;
    double infiltration_ach = 0.6;
    double vent_ach = 4.0;

    friend bool operator==(const ZoneUse&, const ZoneUse&) = default;
};

ZoneUse default_zone_use(SpaceFunction f);
std::vector<std::string> zone_use_issues(const ZoneUse& u);

struct ModelError : std::runtime_error {
    std::string space_id;
    ModelError(const std::string& what, std::string space) : std::runtime_error(what), space_id(std::move(space)) {}
};

struct ThermalNode {
    std::string space_id;
    double capacitance = 0.0;  // J/K
    double ua_exterior = 0.0;  // W/K to outdoor air through the envelope
    double volume = 0.0;       // m3
    double infiltration_ach = 0.0;
    double vent_ach = 0.0;
    std::vector<std::uint8_t> occupied;  // per hour of year; empty = never
    std::vector<double> gains;          // W per hour of year; empty = none
};

struct Coupling {
    std::size_t a = 0;
    std::size_t b = 0;
    double ua = 0.0;  // W/K
};

struct ThermalNetwork {
    std::vector<ThermalNode> nodes;
    std::vector<Coupling> couplings;
    double timestep = 3600.0;  // s
};

// Air change rate of a node this hour given its previous temperature.
double node_ach(const ThermalNode& n, std::size_t hour, double t_prev, double t_out);

// One backward-Euler hour for all nodes simultaneously. Returns the largest absolute
// energy-balance residual over the nodes, in W.
double implicit_step(const ThermalNetwork& net, std::span<const double> t_prev, double t_out,
                     std::span<const double> gains, std::span<const double> ach, std::span<double> t_next);

struct SpaceSeries {
    std::string space_id;
    std::vector<double> temperature;     // operative temperature per hour, degC
    std::vector<std::uint8_t> occupied;  // 1 when occupied
};

struct SimResult {
    std::vector<double> outdoor;
    std::vector<SpaceSeries> spaces;
    double max_residual = 0.0;  // W, worst energy-balance residual over all solves

    const SpaceSeries* find(std::string_view id) const;
};

// Year-long run of a network driven by the weather's dry-bulb temperatures; the first week runs
// twice, the first pass as warm-up starting from the first-hour outdoor temperature.
SimResult simulate_network(const ThermalNetwork& net, const WeatherYear& w);

// Throws ModelError for a space with neither exterior nor interior coupling area.
ThermalNetwork build_network(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w);

SimResult simulate(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w);

struct Assessment {
    SimResult sim;
    DiscomfortResult discomfort;
    double objective = 0.0;
};

Assessment assess(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w,
                  const ComfortModel& m, double w_heat = 1.0, double w_cool = 1.0);

}  // namespace planforge
