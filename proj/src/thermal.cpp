#include "planforge/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>

#include "planforge/simd/kernels.hpp"
#include "planforge/solar.hpp"

namespace planforge {

double assembly_u_value(const Assembly& a) {
    if (a.glazing) return a.glazing->u_value;
    double r = kInsideSurfaceResistance + kOutsideSurfaceResistance;
    for (const auto& l : a.layers) r += l.thickness / l.conductivity;
    return 1.0 / r;
}

Schedule Schedule::constant(double f) {
    Schedule s;
    s.fractions.fill(f);
    return s;
}

Schedule Schedule::daily(double from, double to, double f) {
    Schedule s;
    for (std::size_t h = 0; h < 168; ++h) {
        const double hour = static_cast<double>(h % 24);
        const bool on = from <= to ? (hour >= from && hour < to) : (hour >= from || hour < to);
        s.fractions[h] = on ? f : 0.0;
    }
    return s;
}

double Schedule::at(std::size_t hour_of_year, int jan1_weekday) const {
    const std::size_t day = hour_of_year / 24;
    const std::size_t weekday = (static_cast<std::size_t>(((jan1_weekday % 7) + 7) % 7) + day) % 7;
    return fractions[weekday * 24 + hour_of_year % 24];
}

ZoneUse default_zone_use(SpaceFunction f) {
    ZoneUse u;
    u.equipment_schedule = Schedule::constant(1.0);
    switch (f) {
        case SpaceFunction::Bedroom:
            u.occupants = 2.0;
            u.activity_gain = 70.0;
            u.equipment = 2.0;
            u.lighting = 4.0;
            u.occupancy = Schedule::daily(22.0, 8.0);
            u.lighting_schedule = Schedule::daily(21.0, 23.0);
            break;
        case SpaceFunction::Living: {
            u.occupants = 2.0;
            u.activity_gain = 100.0;
            u.equipment = 4.0;
            u.lighting = 5.0;
            Schedule s;
            for (std::size_t h = 0; h < 168; ++h) {
                const std::size_t day = h / 24, hour = h % 24;
                const bool weekend = day >= 5;
                const bool on = weekend ? (hour >= 9 && hour < 23) : ((hour >= 7 && hour < 9) || (hour >= 18 && hour < 23));
                s.fractions[h] = on ? 1.0 : 0.0;
            }
            u.occupancy = s;
            u.lighting_schedule = Schedule::daily(19.0, 23.0);
            break;
        }
        case SpaceFunction::Kitchen: {
            u.occupants = 1.0;
            u.activity_gain = 120.0;
            u.equipment = 8.0;
            u.lighting = 5.0;
            Schedule s;
            for (std::size_t h = 0; h < 168; ++h) {
                const std::size_t hour = h % 24;
                s.fractions[h] = (hour == 7 || hour == 12 || hour == 19 || hour == 20) ? 1.0 : 0.0;
            }
            u.occupancy = s;
            u.lighting_schedule = Schedule::daily(19.0, 21.0);
            break;
        }
        case SpaceFunction::Bathroom:
            u.lighting = 4.0;
            u.equipment = 0.0;
            u.lighting_schedule = Schedule::daily(7.0, 8.0);
            break;
        case SpaceFunction::Hall:
        case SpaceFunction::Corridor:
        case SpaceFunction::Stair:
            u.equipment = 0.0;
            break;
        case SpaceFunction::Other:
            u.occupants = 1.0;
            u.activity_gain = 100.0;
            u.equipment = 4.0;
            u.lighting = 5.0;
            u.occupancy = Schedule::daily(9.0, 18.0);
            u.lighting_schedule = Schedule::daily(9.0, 18.0);
            break;
    }
    return u;
}

std::vector<std::string> zone_use_issues(const ZoneUse& u) {
    std::vector<std::string> out;
    auto nonneg = [&](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be >= 0");
    };
    nonneg(u.occupants, "occupants");
    nonneg(u.activity_gain, "activity_gain");
    nonneg(u.equipment, "equipment");
    nonneg(u.lighting, "lighting");
    nonneg(u.infiltration_ach, "infiltration_ach");
    nonneg(u.vent_ach, "vent_ach");
    auto fractions = [&](const Schedule& s, const char* name) {
        for (double f : s.fractions) {
            if (!(f >= 0.0 && f <= 1.0)) {
                out.push_back(std::string(name) + " fractions must be in [0,1]");
                return;
            }
        }
    };
    fractions(u.occupancy, "occupancy schedule");
    fractions(u.equipment_schedule, "equipment schedule");
    fractions(u.lighting_schedule, "lighting schedule");
    return out;
}

double node_ach(const ThermalNode& n, std::size_t hour, double t_prev, double t_out) {
    double ach = n.infiltration_ach;
    const bool occupied = hour < n.occupied.size() && n.occupied[hour] != 0;
    if (occupied && t_prev > t_out && t_prev > kComfortVentThreshold) ach += n.vent_ach;
    return ach;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd system_matrix(const ThermalNetwork& net, std::span<const double> ach) {
    const auto n = static_cast<Eigen::Index>(net.nodes.size());
    MatrixXd a = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& node = net.nodes[static_cast<std::size_t>(i)];
        a(i, i) = node.capacitance / net.timestep + node.ua_exterior +
                  kAirHeatCapacity * node.volume * ach[static_cast<std::size_t>(i)] / 3600.0;
    }
    for (const auto& c : net.couplings) {
        const auto i = static_cast<Eigen::Index>(c.a), j = static_cast<Eigen::Index>(c.b);
        a(i, i) += c.ua;
        a(j, j) += c.ua;
        a(i, j) -= c.ua;
        a(j, i) -= c.ua;
    }
    return a;
}

VectorXd right_hand_side(const ThermalNetwork& net, std::span<const double> t_prev, double t_out,
                         std::span<const double> gains, std::span<const double> ach) {
    const auto n = static_cast<Eigen::Index>(net.nodes.size());
    VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto& node = net.nodes[k];
        const double h_vent = kAirHeatCapacity * node.volume * ach[k] / 3600.0;
        b(i) = node.capacitance / net.timestep * t_prev[k] + (node.ua_exterior + h_vent) * t_out + gains[k];
    }
    return b;
}

// Factorizations keyed by the per-node air change rates.
class Stepper {
public:
    explicit Stepper(const ThermalNetwork& net) : net_(net) {}

    double step(std::span<const double> t_prev, double t_out, std::span<const double> gains, std::span<const double> ach,
                std::span<double> t_next) {
        std::vector<double> key(ach.begin(), ach.end());
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            if (cache_.size() >= 256) cache_.clear();
            Entry e;
            e.a = system_matrix(net_, ach);
            e.llt.compute(e.a);
            it = cache_.emplace(std::move(key), std::move(e)).first;
        }
        const VectorXd b = right_hand_side(net_, t_prev, t_out, gains, ach);
        VectorXd x = it->second.llt.solve(b);
        VectorXd r = it->second.a * x - b;
        x -= it->second.llt.solve(r);
        r = it->second.a * x - b;
        for (std::size_t i = 0; i < t_next.size(); ++i) t_next[i] = x(static_cast<Eigen::Index>(i));
        return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    }

private:
    struct Entry {
        MatrixXd a;
        Eigen::LLT<MatrixXd> llt;
    };
    const ThermalNetwork& net_;
    std::map<std::vector<double>, Entry> cache_;
};

}  // namespace

double implicit_step(const ThermalNetwork& net, std::span<const double> t_prev, double t_out,
                     std::span<const double> gains, std::span<const double> ach, std::span<double> t_next) {
    Stepper s(net);
    return s.step(t_prev, t_out, gains, ach, t_next);
}

const SpaceSeries* SimResult::find(std::string_view id) const {
    for (const auto& s : spaces) {
        if (s.space_id == id) return &s;
    }
    return nullptr;
}

SimResult simulate_network(const ThermalNetwork& net, const WeatherYear& w) {
    if (auto issues = weather_issues(w); !issues.empty()) throw WeatherError(issues.front());
    const std::size_t n = net.nodes.size();
    SimResult out;
    out.outdoor.resize(kHoursPerYear);
    for (std::size_t h = 0; h < kHoursPerYear; ++h) out.outdoor[h] = w.hours[h].dry_bulb;
    out.spaces.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.spaces[i].space_id = net.nodes[i].space_id;
        out.spaces[i].temperature.resize(kHoursPerYear);
        out.spaces[i].occupied.assign(kHoursPerYear, 0);
        const auto& occ = net.nodes[i].occupied;
        for (std::size_t h = 0; h < kHoursPerYear && h < occ.size(); ++h) out.spaces[i].occupied[h] = occ[h] ? 1 : 0;
    }
    if (n == 0) return out;

    Stepper stepper(net);
    std::vector<double> t(n, w.hours[0].dry_bulb), next(n), gains(n), ach(n);
    auto run = [&](std::size_t hours, bool record) {
        for (std::size_t h = 0; h < hours; ++h) {
            const double t_out = w.hours[h].dry_bulb;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& node = net.nodes[i];
                gains[i] = h < node.gains.size() ? node.gains[h] : 0.0;
                ach[i] = node_ach(node, h, t[i], t_out);
            }
            const double res = stepper.step(t, t_out, gains, ach, next);
            out.max_residual = std::max(out.max_residual, res);
            std::swap(t, next);
            if (record) {
                for (std::size_t i = 0; i < n; ++i) out.spaces[i].temperature[h] = t[i];
            }
        }
    };
    run(168, false);
    run(kHoursPerYear, true);
    return out;
}

namespace {

bool on_exterior(const Building& b, const Space& s, const Opening& o) {
    const double c = o.offset + 0.5 * o.width;
    return boundary_contact_length(s.rect, o.side, c - 1e-6, c + 1e-6, b.boundary, b.party_edges) > 0.0;
}

}  // namespace

ThermalNetwork build_network(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w) {
    ThermalNetwork net;
    std::vector<const Space*> spaces;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) spaces.push_back(&s);
    }
    const std::size_t n = spaces.size();
    const double height = b.storey_height;
    const auto& cons = b.constructions;
    std::vector<double> coupling_area(n, 0.0), exterior_area(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Space& a = *spaces[i];
            const Space& c = *spaces[j];
            double area = 0.0, u = 0.0;
            if (a.storey == c.storey) {
                area = shared_edge_length(a.rect, c.rect) * height;
                u = assembly_u_value(a.assembly(ElementKind::InteriorWall, cons));
            } else if (std::abs(a.storey - c.storey) == 1) {
                area = overlap_area(a.rect, c.rect);
                const Space& lower = a.storey < c.storey ? a : c;
                u = assembly_u_value(lower.assembly(ElementKind::Ceiling, cons));
            }
            if (area <= 0.0) continue;
            net.couplings.push_back({i, j, u * area});
            coupling_area[i] += area;
            coupling_area[j] += area;
        }
    }

    const auto sun = annual_sun_path(w.location);
    std::map<double, std::vector<double>> direct_by_azimuth;
    std::vector<double> diffuse(kHoursPerYear), shade(kHoursPerYear);
    for (std::size_t h = 0; h < kHoursPerYear; ++h) diffuse[h] = incident_diffuse(w.hours[h].dhi);

    for (std::size_t i = 0; i < n; ++i) {
        const Space& s = *spaces[i];
        ThermalNode node;
        node.space_id = s.id;
        node.volume = s.rect.area() * height;
        const auto it = uses.find(s.id);
        const ZoneUse use = it != uses.end() ? it->second : default_zone_use(s.function);
        node.infiltration_ach = use.infiltration_ach;
        node.vent_ach = use.vent_ach;

        const Assembly& ext_wall = s.assembly(ElementKind::ExteriorWall, cons);
        const Assembly& window = s.assembly(ElementKind::Window, cons);
        const Assembly& door = s.assembly(ElementKind::Door, cons);
        const double u_wall = assembly_u_value(ext_wall);
        const double u_window = assembly_u_value(window);
        const double u_door = assembly_u_value(door);
        const double shgc = window.glazing ? window.glazing->shgc : 0.0;

        node.gains.assign(kHoursPerYear, 0.0);
        double opaque = 0.0;
        for (Side side : {Side::N, Side::E, Side::S, Side::W}) {
            const double len = boundary_contact_length(s.rect, side, 0.0, wall_length(s.rect, side), b.boundary, b.party_edges);
            double wall = len * height;
            const double az = wall_azimuth(side, b.orientation);
            for (const auto& o : s.openings) {
                if (o.side != side || !on_exterior(b, s, o)) continue;
                if (o.kind == OpeningKind::Door && !o.connects_to.empty()) continue;
                const double area = o.width * o.height;
                wall -= area;
                if (o.kind == OpeningKind::Door) {
                    node.ua_exterior += u_door * area;
                    continue;
                }
                node.ua_exterior += u_window * area;
                auto dit = direct_by_azimuth.find(az);
                if (dit == direct_by_azimuth.end()) {
                    std::vector<double> direct(kHoursPerYear);
                    for (std::size_t h = 0; h < kHoursPerYear; ++h) direct[h] = incident_direct(sun[h], w.hours[h].dni, az);
                    dit = direct_by_azimuth.emplace(az, std::move(direct)).first;
                }
                for (std::size_t h = 0; h < kHoursPerYear; ++h) shade[h] = shading_fraction(o, sun[h], az);
                simd::accumulate_solar_gain(area * shgc, dit->second, shade, diffuse, node.gains);
            }
            wall = std::max(0.0, wall);
            opaque += wall;
            node.ua_exterior += u_wall * wall;
            exterior_area[i] += len * height;
        }

        double partitions = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && spaces[j]->storey == s.storey) partitions += shared_edge_length(s.rect, spaces[j]->rect) * height;
        }
        node.capacitance = opaque * ext_wall.heat_capacity_per_area() +
                           0.5 * partitions * s.assembly(ElementKind::InteriorWall, cons).heat_capacity_per_area() +
                           s.rect.area() * (s.assembly(ElementKind::Pavement, cons).heat_capacity_per_area() +
                                            s.assembly(ElementKind::Ceiling, cons).heat_capacity_per_area()) +
                           kAirHeatCapacity * node.volume;

        if (exterior_area[i] <= 0.0 && coupling_area[i] <= 0.0) {
            throw ModelError("space '" + s.id + "' is thermally isolated: no exterior or interior coupling area", s.id);
        }

        node.occupied.assign(kHoursPerYear, 0);
        const double area = s.rect.area();
        for (std::size_t h = 0; h < kHoursPerYear; ++h) {
            const double occ = use.occupancy.at(h, w.jan1_weekday);
            node.occupied[h] = (use.occupants > 0.0 && occ > 0.0) ? 1 : 0;
            node.gains[h] += use.occupants * use.activity_gain * occ +
                             use.equipment * area * use.equipment_schedule.at(h, w.jan1_weekday) +
                             use.lighting * area * use.lighting_schedule.at(h, w.jan1_weekday);
        }
        net.nodes.push_back(std::move(node));
    }
    return net;
}

SimResult simulate(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w) {
    if (auto issues = weather_issues(w); !issues.empty()) throw WeatherError(issues.front());
    return simulate_network(build_network(b, uses, w), w);
}

Assessment assess(const Building& b, const std::map<std::string, ZoneUse>& uses, const WeatherYear& w,
                  const ComfortModel& m, double w_heat, double w_cool) {
    Assessment a;
    a.sim = simulate(b, uses, w);
    a.discomfort = degree_hours(a.sim, m, w);
    a.objective = discomfort_objective(a.discomfort, w_heat, w_cool);
    return a;
}

}  // namespace planforge
