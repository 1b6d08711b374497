// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "planforge/comfort.hpp"
#include "planforge/dxf.hpp"
#include "planforge/generator.hpp"
#include "planforge/indicators.hpp"
#include "planforge/project_io.hpp"
#include "planforge/seqopt.hpp"
#include "planforge/thermal.hpp"
#include "support/fixtures.hpp"
#include "support/random_project.hpp"
#include "support/service_harness.hpp"

using namespace planforge;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kStairDrift = 0.5;          // m
constexpr double kFig1Seconds = 300.0;
constexpr std::int64_t kFig1Budget = 200000;
constexpr int kMonotoneRuns = 20;
constexpr std::int64_t kToy3Budget = 4000;
constexpr std::int64_t kToy1Budget = 20000;
constexpr double kFaultRelTol = 1e-9;
constexpr double kDegreeHourTol = 1e-9;      // K h
constexpr double kSteadyTol = 0.01;          // K
constexpr double kStepHand = 17.353;         // degC
constexpr double kStepTol = 0.001;
constexpr double kBandTol = 1e-9;
constexpr double kOptSeconds = 120.0;
constexpr double kSymmetryTol = 1e-6;        // K h
constexpr double kGeometryTol = 1e-6;        // m
constexpr int kRandomBuildings = 100;
constexpr int kRandomProjects = 500;

struct Result {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& why) {
        if (!cond && ok) detail = why;
        ok = ok && cond;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Point2 centroid(const Rect& r) { return {r.min_x() + r.width / 2, r.min_y() + r.height / 2}; }

Result fig1() {
    Result res;
    const Project p = parse_project(testing::read_text(std::string(PLANFORGE_FIXTURE_DIR) + "/fig1_project.json"));
    GeneratorConfig cfg = p.generator;
    cfg.seed = 1;
    res.require(cfg.max_evaluations <= kFig1Budget, "budget above 200000");
    const auto t0 = Clock::now();
    const EvolveReport r = evolve(p.program, cfg, p.weights);
    const double secs = seconds_since(t0);
    res.require(r.evaluations <= kFig1Budget, "used " + std::to_string(r.evaluations) + " evaluations");
    res.require(secs <= kFig1Seconds, "took " + num(secs) + " s");
    if (r.solutions.empty()) {
        res.require(false, "no solution");
        return res;
    }
    const Building& b = r.solutions.front().building;
    const PerformanceVector v = evaluate(b, p.program);
    res.require(v[Indicator::SpaceOverlap] == 0.0, "overlap " + num(v[Indicator::SpaceOverlap]));
    res.require(v[Indicator::Overflow] == 0.0, "overflow " + num(v[Indicator::Overflow]));
    for (const auto& req : p.program.space_reqs) {
        const Space* s = primary_instance(b, req.id);
        if (!s) {
            res.require(false, "missing " + req.id);
            continue;
        }
        double area = 0.0;
        for (const auto& plan : b.plans) {
            for (const auto& sp : plan.spaces) {
                if (sp.requirement == req.id) area += sp.rect.area();
            }
        }
        res.require(area >= req.area_min - 1e-9 && area <= req.area_max + 1e-9, req.id + " area " + num(area));
    }
    for (const auto& adj : p.program.adjacency_reqs) {
        const Space* a = primary_instance(b, adj.a);
        const Space* c = primary_instance(b, adj.b);
        const double edge = a && c && a->storey == c->storey ? shared_edge_length(a->rect, c->rect) : 0.0;
        res.require(edge >= p.program.openings.min_door_width - 1e-9, adj.a + "/" + adj.b + " share " + num(edge) + " m");
    }
    std::vector<const Space*> stairs(static_cast<std::size_t>(p.program.storey_count), nullptr);
    for (const auto& plan : b.plans) {
        for (const auto& sp : plan.spaces) {
            if (sp.function == SpaceFunction::Stair && sp.storey >= 0 && sp.storey < p.program.storey_count) stairs[sp.storey] = &sp;
        }
    }
    for (std::size_t k = 0; k + 1 < stairs.size(); ++k) {
        if (!stairs[k] || !stairs[k + 1]) {
            res.require(false, "stair missing on storey " + std::to_string(stairs[k] ? k + 1 : k));
            continue;
        }
        const Point2 a = centroid(stairs[k]->rect), c = centroid(stairs[k + 1]->rect);
        const double d = std::hypot(a.x - c.x, a.y - c.y);
        res.require(d <= kStairDrift, "stair drift " + num(d) + " m above storey " + std::to_string(k));
    }
    if (res.ok) res.detail = num(secs) + " s, " + std::to_string(r.evaluations) + " evaluations";
    return res;
}

Result es_monotone() {
    Result res;
    const DesignProgram toy3 = fixtures::toy_three_spaces();
    for (int seed = 1; seed <= kMonotoneRuns; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.max_evaluations = kToy3Budget;
        const EvolveReport r = evolve(toy3, cfg, fixtures::toy_weights());
        for (std::size_t g = 1; g < r.best_history.size(); ++g) {
            res.require(r.best_history[g] <= r.best_history[g - 1], "seed " + std::to_string(seed) + " rose at generation " + std::to_string(g));
        }
        res.require(!r.best_history.empty(), "no history");
    }
    GeneratorConfig cfg;
    cfg.seed = 1;
    cfg.max_evaluations = kToy1Budget;
    const EvolveReport one = evolve(fixtures::toy_one_space(), cfg, fixtures::toy_weights());
    res.require(!one.solutions.empty() && one.solutions.front().objective == 0.0,
                "one-space objective " + (one.solutions.empty() ? std::string("none") : num(one.solutions.front().objective)));
    return res;
}

Result zero_fixture() {
    Result res;
    const auto z = fixtures::zero_fixture();
    const PerformanceVector v = evaluate(z.building, z.program);
    for (Indicator i : all_indicators()) res.require(v[i] == 0.0, std::string(indicator_name(i)) + " nonzero on the fixture");
    const auto faults = fixtures::single_faults();
    res.require(faults.size() == kIndicatorCount, "fault table incomplete");
    for (const auto& f : faults) {
        auto zf = fixtures::zero_fixture();
        f.apply(zf);
        const PerformanceVector fv = evaluate(zf.building, zf.program);
        for (Indicator i : all_indicators()) {
            const std::string who = std::string(indicator_name(f.raised)) + " fault: " + std::string(indicator_name(i));
            if (i == f.raised) res.require(std::abs(fv[i] - f.expected) <= kFaultRelTol * std::max(1.0, f.expected), who + " = " + num(fv[i]));
            else res.require(fv[i] == 0.0, who + " raised");
        }
    }
    return res;
}

Result degree_hours_oracle() {
    Result res;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> temp(5.0, 38.0), mean(-5.0, 30.0);
    const std::vector<ComfortModel> models = {ComfortModel::en15251(2), ComfortModel::ashrae55(80), ComfortModel::fixed(20, 26)};
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        WeatherYear w = constant_weather(Location{}, 0.0);
        for (auto& h : w.hours) h.dry_bulb = mean(rng);
        SimResult sim;
        sim.outdoor.assign(kHoursPerYear, 0.0);
        SpaceSeries s;
        s.space_id = "z";
        s.temperature.resize(kHoursPerYear);
        s.occupied.resize(kHoursPerYear);
        for (std::size_t h = 0; h < kHoursPerYear; ++h) {
            s.temperature[h] = temp(rng);
            s.occupied[h] = (rng() & 3) != 0;
        }
        sim.spaces.push_back(s);
        const ComfortModel& m = models[k % models.size()];
        const auto trm = running_means(w);
        double heat = 0.0, cool = 0.0;
        for (std::size_t h = 0; h < kHoursPerYear; ++h) {
            if (!s.occupied[h]) continue;
            const Band b = comfort_band(m, trm[h / 24]);
            heat += std::max(0.0, b.lower - s.temperature[h]);
            cool += std::max(0.0, s.temperature[h] - b.upper);
        }
        const auto d = degree_hours(sim, m, w);
        worst = std::max({worst, std::abs(d.heating_total - heat), std::abs(d.cooling_total - cool)});
    }
    res.require(worst <= kDegreeHourTol, "max error " + num(worst) + " K h");
    return res;
}

Result thermal_steady() {
    Result res;
    ThermalNetwork net;
    ThermalNode n;
    n.space_id = "z";
    n.capacitance = 1e6;
    n.ua_exterior = 100.0;
    n.gains.assign(kHoursPerYear, 500.0);
    net.nodes.push_back(n);
    const SimResult r = simulate_network(net, constant_weather(Location{}, 10.0));
    const double expect = 10.0 + 500.0 / 100.0;
    res.require(std::abs(r.spaces[0].temperature.back() - expect) <= kSteadyTol, "steady " + num(r.spaces[0].temperature.back()));

    net.nodes[0].gains.clear();
    const double t0[] = {20.0}, q[] = {0.0}, ach[] = {0.0};
    double t1[1];
    implicit_step(net, t0, 10.0, q, ach, t1);
    res.require(std::abs(t1[0] - kStepHand) <= kStepTol, "step " + num(t1[0]));
    return res;
}

Result comfort_bands() {
    Result res;
    const Band en = comfort_band(ComfortModel::en15251(2), 20.0);
    const Band ash = comfort_band(ComfortModel::ashrae55(80), 20.0);
    res.require(std::abs(en.lower - 22.4) <= kBandTol && std::abs(en.upper - 28.4) <= kBandTol,
                "EN band " + num(en.lower) + ".." + num(en.upper));
    res.require(std::abs(ash.lower - 20.5) <= kBandTol && std::abs(ash.upper - 27.5) <= kBandTol,
                "ASHRAE band " + num(ash.lower) + ".." + num(ash.upper));
    return res;
}

struct Zone {
    DesignProgram program;
    Building building;
    WeatherYear weather;
    OptContext ctx;
};

Opening window(Side side) {
    Opening o;
    o.side = side;
    o.offset = 1.0;
    o.width = 2.0;
    o.height = 1.0;
    return o;
}

// Single 4x4 zone filling its boundary.
std::unique_ptr<Zone> zone(std::vector<Opening> openings, WeatherYear w) {
    auto z = std::make_unique<Zone>();
    z->program.boundary = rectangle_boundary(0, 0, 4, 4);
    z->program.gross_area_limit = z->program.construction_area_limit = 16.0;
    z->program.space_reqs.push_back(fixtures::requirement("z", SpaceFunction::Living, 0, 12, 20, 3));
    z->building.boundary = z->program.boundary;
    z->building.plans.resize(1);
    Space s;
    s.id = s.requirement = "z";
    s.function = SpaceFunction::Living;
    s.rect = make_rect(0, 0, 4, 4);
    s.openings = std::move(openings);
    z->building.plans[0].spaces.push_back(s);
    z->weather = std::move(w);
    z->ctx.program = &z->program;
    z->ctx.weather = &z->weather;
    z->ctx.comfort = ComfortModel::en15251(2);
    return z;
}

bool non_increasing(const OptTrace& t) {
    double prev = t.initial_objective;
    for (const auto& s : t.steps) {
        if (s.objective_after > s.objective_before || s.objective_before > prev) return false;
        prev = s.objective_after;
    }
    return t.final_objective <= prev;
}

Result sequential_optimizer() {
    Result res;
    const auto t0 = Clock::now();
    SyntheticClimate hot;
    hot.annual_mean = 30.0;
    hot.annual_amplitude = 0.0;
    hot.daily_amplitude = 0.0;
    const auto z = zone({window(Side::S)}, synthetic_weather(Location{}, hot));
    Strategy s;
    s.order = {VariableKind::OverhangDepth};
    s.steps_per_variable = 4;
    s.max_passes = 1;
    const RunResult r = run(z->building, z->ctx, s);
    const double before = assess(z->building, {}, z->weather, z->ctx.comfort).discomfort.cooling_total;
    const double after = assess(r.building, {}, z->weather, z->ctx.comfort).discomfort.cooling_total;
    res.require(after < before, "cooling " + num(before) + " -> " + num(after));
    res.require(non_increasing(r.trace), "overhang trace rises");

    Strategy full;
    full.steps_per_variable = 4;
    full.max_passes = 2;
    const RunResult all = run(z->building, z->ctx, full);
    res.require(non_increasing(all.trace), "full trace rises");
    Strategy once = full;
    once.max_passes = 1;
    const RunResult again = run(all.building, z->ctx, once);
    res.require(again.building == all.building, "second run changed the building");
    for (const auto& st : again.trace.steps) res.require(st.status != StepStatus::Changed, "second run changed a variable");
    const double secs = seconds_since(t0);
    res.require(secs <= kOptSeconds, "took " + num(secs) + " s");
    if (res.ok) res.detail = "cooling " + num(before) + " -> " + num(after) + " K h";
    return res;
}

Result orientation_symmetry() {
    Result res;
    const auto z = zone({window(Side::N), window(Side::E), window(Side::S), window(Side::W)}, synthetic_weather(Location{}));
    Strategy s;
    s.order = {VariableKind::BuildingOrientation};
    s.steps_per_variable = 4;
    s.max_passes = 1;
    const RunResult r = run(z->building, z->ctx, s);
    if (r.trace.steps.size() != 1 || r.trace.steps[0].objectives.size() != 4) {
        res.require(false, "unexpected trace shape");
        return res;
    }
    const auto& o = r.trace.steps[0].objectives;
    double spread = 0.0;
    for (double x : o) spread = std::max(spread, std::abs(x - o[0]));
    res.require(spread <= kSymmetryTol, "spread " + num(spread) + " K h");
    res.require(r.building.orientation == z->building.orientation && r.trace.steps[0].status != StepStatus::Changed,
                "orientation changed");
    return res;
}

bool ends_with_eof(const std::string& t) { return t.size() >= 6 && t.compare(t.size() - 6, 6, "0\nEOF\n") == 0; }

Result exports() {
    Result res;
    Rng rng(77);
    for (int k = 0; k < kRandomBuildings; ++k) {
        const Building b = testing::random_building(rng);
        for (std::size_t st = 0; st < b.plans.size(); ++st) {
            const std::string text = to_dxf(b, DxfMode::plan2d(static_cast<int>(st)));
            res.require(ends_with_eof(text), "plan DXF without EOF");
            const DxfGeometry g = read_dxf_geometry(parse_dxf(text));
            for (const auto& sp : b.plans[st].spaces) {
                const bool found = std::any_of(g.polylines.begin(), g.polylines.end(), [&](const DxfPolyline& pl) {
                    if (pl.layer != kSpacesLayer || pl.points.size() != 4) return false;
                    double x0 = pl.points[0].x, y0 = pl.points[0].y, x1 = x0, y1 = y0;
                    for (const auto& p : pl.points) {
                        x0 = std::min(x0, p.x);
                        y0 = std::min(y0, p.y);
                        x1 = std::max(x1, p.x);
                        y1 = std::max(y1, p.y);
                    }
                    return std::abs(x0 - sp.rect.min_x()) <= kGeometryTol && std::abs(y0 - sp.rect.min_y()) <= kGeometryTol &&
                           std::abs(x1 - sp.rect.max_x()) <= kGeometryTol && std::abs(y1 - sp.rect.max_y()) <= kGeometryTol;
                });
                res.require(found, "space " + sp.id + " lost in DXF");
            }
        }
        res.require(ends_with_eof(to_dxf(b, DxfMode::wire3d())), "3D DXF without EOF");
    }
    Rng prng(20240601);
    for (int k = 0; k < kRandomProjects; ++k) {
        const Project p = testing::random_project(prng, k);
        const std::string text = serialize_project(p);
        res.require(serialize_project(parse_project(text)) == text, "project " + std::to_string(k) + " did not round-trip");
    }
    return res;
}

Result service() {
    Result res;
    const auto dir = harness::fresh_dir("acceptance-lifecycle");
    for (const auto& f : harness::lifecycle(dir, PLANFORGE_FIXTURE_DIR)) res.require(false, "lifecycle: " + f);
    std::filesystem::remove_all(dir);
    const auto kdir = harness::fresh_dir("acceptance-kill");
    for (const auto& f : harness::kill_restart(kdir, PLANFORGE_FIXTURE_DIR, PLANFORGE_CLI_PATH)) res.require(false, "restart: " + f);
    std::filesystem::remove_all(kdir);
    return res;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
        {"fig1-scenario", fig1},
        {"es-monotonicity", es_monotone},
        {"indicator-zero-fixture", zero_fixture},
        {"degree-hours-oracle", degree_hours_oracle},
        {"thermal-steady-state", thermal_steady},
        {"comfort-bands", comfort_bands},
        {"sequential-optimizer", sequential_optimizer},
        {"orientation-symmetry", orientation_symmetry},
        {"exports", exports},
        {"service", service},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.ok = false;
            r.detail = std::string("exception: ") + e.what();
        }
        failed += !r.ok;
        std::printf("%s %s%s%s\n", r.ok ? "PASS" : "FAIL", name, r.detail.empty() ? "" : "  ", r.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
