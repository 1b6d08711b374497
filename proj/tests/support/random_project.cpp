#include "random_project.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace testing {

namespace {

double u(Rng& rng, double lo, double hi) { return uniform(rng, lo, hi); }
bool coin(Rng& rng, double p = 0.5) { return uniform01(rng) < p; }
int pick(Rng& rng, int lo, int hi) { return static_cast<int>(uniform_int(rng, lo, hi)); }

Boundary random_boundary(Rng& rng) {
    const double w = u(rng, 6, 30), h = u(rng, 6, 30);
    const double x0 = u(rng, -20, 20), y0 = u(rng, -20, 20);
    if (coin(rng)) return rectangle_boundary(x0, y0, x0 + w, y0 + h);
    const double nx = u(rng, 0.2, 0.8) * w, ny = u(rng, 0.2, 0.8) * h;
    return Boundary{{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + ny}, {x0 + nx, y0 + ny}, {x0 + nx, y0 + h}, {x0, y0 + h}}};
}

Assembly random_assembly(Rng& rng, bool glazing) {
    Assembly a;
    if (glazing) {
        a.glazing = Glazing{u(rng, 0.8, 5.8), u(rng, 0.1, 0.9)};
        return a;
    }
    const int n = pick(rng, 1, 3);
    for (int i = 0; i < n; ++i) a.layers.push_back(Layer{u(rng, 0.01, 0.4), u(rng, 0.03, 2.5), u(rng, 20, 2400), u(rng, 800, 2000)});
    return a;
}

Opening random_opening(Rng& rng, const Rect& r) {
    Opening o;
    o.kind = coin(rng, 0.6) ? OpeningKind::Window : OpeningKind::Door;
    o.side = static_cast<Side>(pick(rng, 0, 3));
    const double len = wall_length(r, o.side);
    o.width = u(rng, 0.3, std::max(0.31, 0.9 * len));
    o.offset = u(rng, 0.0, std::max(0.0, len - o.width));
    o.height = u(rng, 0.5, 2.2);
    if (o.kind == OpeningKind::Window) {
        o.sill = u(rng, 0.3, 1.2);
        if (coin(rng)) o.overhang_depth = u(rng, 0, 1.5);
        if (coin(rng, 0.3)) o.fin_depth_left = u(rng, 0, 1.5);
        if (coin(rng, 0.3)) o.fin_depth_right = u(rng, 0, 1.5);
    } else {
        o.sill = 0.0;
        if (coin(rng)) o.connects_to = "s" + std::to_string(pick(rng, 0, 9));
    }
    return o;
}

constexpr SpaceFunction kFunctions[] = {SpaceFunction::Bedroom, SpaceFunction::Living, SpaceFunction::Kitchen,
                                        SpaceFunction::Bathroom, SpaceFunction::Hall,  SpaceFunction::Corridor,
                                        SpaceFunction::Stair,   SpaceFunction::Other};

constexpr ElementKind kKinds[] = {ElementKind::ExteriorWall, ElementKind::InteriorWall, ElementKind::Ceiling,
                                  ElementKind::Pavement,     ElementKind::Window,       ElementKind::Door};

Schedule random_schedule(Rng& rng) {
    if (coin(rng)) return Schedule::constant(coin(rng) ? 1.0 : 0.0);
    Schedule s;
    for (auto& f : s.fractions) f = coin(rng, 0.3) ? u(rng, 0, 1) : 0.0;
    return s;
}

Sector random_sector(Rng& rng) { return Sector{u(rng, 0, 360), u(rng, 5, 90)}; }

}  // namespace

Building random_building(Rng& rng) {
    Building b;
    b.boundary = random_boundary(rng);
    b.storey_count = pick(rng, 1, 3);
    b.storey_height = u(rng, 2.4, 3.6);
    b.orientation = u(rng, 0, 360);
    b.location = Location{u(rng, -60, 60), u(rng, -180, 180), static_cast<double>(pick(rng, -12, 12)), u(rng, 0, 2000)};
    if (coin(rng, 0.3)) b.party_edges = {pick(rng, 0, static_cast<int>(b.boundary.edge_count()) - 1)};
    if (coin(rng, 0.3)) b.constructions[ElementKind::ExteriorWall] = random_assembly(rng, false);
    const Rect bb = b.boundary.bounding_box();
    int next_id = 0;
    for (int k = 0; k < b.storey_count; ++k) {
        FloorPlan plan;
        plan.storey = k;
        const int n = pick(rng, 0, 6);
        for (int i = 0; i < n; ++i) {
            Space s;
            s.id = "s" + std::to_string(next_id++);
            if (coin(rng, 0.8)) s.requirement = s.id;
            s.function = kFunctions[pick(rng, 0, 7)];
            if (s.function == SpaceFunction::Other) s.function_tag = coin(rng) ? "studio" : "store, \"dry\"";
            s.storey = k;
            const double w = u(rng, 1.0, std::min(8.0, bb.width)), h = u(rng, 1.0, std::min(8.0, bb.height));
            s.rect = make_rect(u(rng, bb.min_x(), bb.max_x() - w), u(rng, bb.min_y(), bb.max_y() - h), w, h);
            const int no = pick(rng, 0, 3);
            for (int j = 0; j < no; ++j) s.openings.push_back(random_opening(rng, s.rect));
            if (coin(rng, 0.2)) s.construction_overrides[ElementKind::InteriorWall] = random_assembly(rng, false);
            if (coin(rng, 0.1)) s.construction_overrides[ElementKind::Window] = random_assembly(rng, true);
            plan.spaces.push_back(std::move(s));
        }
        b.plans.push_back(std::move(plan));
    }
    return b;
}

Project random_project(Rng& rng, int index) {
    Project p;
    p.id = "p" + std::to_string(index);
    p.name = coin(rng) ? "House " + std::to_string(index) : "Quote \"" + std::to_string(index) + "\", ünïcode";
    p.created = "2026-03-0" + std::to_string(1 + index % 9) + "T12:00:00Z";
    p.updated = p.created;

    DesignProgram& g = p.program;
    g.boundary = random_boundary(rng);
    g.storey_count = pick(rng, 1, 4);
    g.storey_height = u(rng, 2.4, 3.6);
    g.gross_area_limit = u(rng, 50, 900);
    g.construction_area_limit = g.gross_area_limit * u(rng, 1.0, 1.3);
    const int nreq = pick(rng, 1, 8);
    for (int i = 0; i < nreq; ++i) {
        SpaceRequirement r;
        r.id = "r" + std::to_string(i);
        r.function = kFunctions[pick(rng, 0, 7)];
        if (r.function == SpaceFunction::Other) r.function_tag = "tag" + std::to_string(i);
        r.storey = pick(rng, 0, g.storey_count - 1);
        r.area_min = u(rng, 2, 20);
        r.area_max = r.area_min + u(rng, 0, 15);
        r.min_dimension = u(rng, 1, 3);
        if (coin(rng, 0.3)) r.orientation_pref = random_sector(rng);
        if (coin(rng, 0.2)) r.window_orientation_pref = random_sector(rng);
        if (coin(rng, 0.2)) r.position_pref = Point2{u(rng, -5, 5), u(rng, -5, 5)};
        r.window_required = coin(rng);
        g.space_reqs.push_back(r);
    }
    for (int i = 1; i < nreq; ++i) {
        if (coin(rng)) {
            g.adjacency_reqs.push_back({"r" + std::to_string(i), "r" + std::to_string(pick(rng, 0, i - 1)),
                                        coin(rng) ? AdjacencyKind::DoorConnected : AdjacencyKind::Adjacent});
        }
    }
    if (coin(rng, 0.3)) g.neighbor_sides = {1};
    g.openings = OpeningRules{u(rng, 0.7, 1.2), u(rng, 0.5, 1.5), u(rng, 0.05, 0.25)};
    g.site.location = Location{u(rng, -60, 60), u(rng, -180, 180), static_cast<double>(pick(rng, -12, 12)), u(rng, 0, 3000)};
    g.site.orientation = u(rng, 0, 360);
    if (coin(rng, 0.3)) g.site.constructions[ElementKind::Ceiling] = random_assembly(rng, false);
    if (coin(rng, 0.3)) g.site.constructions[ElementKind::Window] = random_assembly(rng, true);

    GeneratorConfig& c = p.generator;
    c.lambda = pick(rng, 1, 32);
    c.max_evaluations = pick(rng, 0, 500000);
    c.transforms_min = pick(rng, 1, 3);
    c.transforms_max = c.transforms_min + pick(rng, 0, 3);
    c.greediness = u(rng, 0, 1);
    c.ema_rate = u(rng, 0.01, 0.5);
    c.weight_floor = u(rng, 0.01, 0.2);
    c.stagnation_restart = pick(rng, 10, 2000);
    c.seed = rng();
    c.grid = coin(rng) ? 0.05 : u(rng, 0, 0.2);
    c.snap_distance = u(rng, 0, 0.5);
    c.workers = pick(rng, 1, 8);

    for (auto& w : p.weights.values) w = coin(rng, 0.2) ? 0.0 : u(rng, 0, 20);

    p.strategy.order.clear();
    const auto& all = default_variable_order();
    for (VariableKind k : all) {
        if (coin(rng, 0.7)) p.strategy.order.push_back(k);
    }
    if (p.strategy.order.empty()) p.strategy.order.push_back(all[static_cast<std::size_t>(pick(rng, 0, 7))]);
    p.strategy.steps_per_variable = pick(rng, 2, 24);
    p.strategy.max_passes = pick(rng, 1, 5);
    p.strategy.feasibility_tolerance = coin(rng) ? 0.0 : u(rng, 0, 1);

    const int nuses = pick(rng, 0, 3);
    for (int i = 0; i < nuses; ++i) {
        ZoneUse z;
        z.occupants = u(rng, 0, 5);
        z.activity_gain = u(rng, 60, 150);
        z.equipment = u(rng, 0, 10);
        z.lighting = u(rng, 0, 10);
        z.occupancy = random_schedule(rng);
        z.equipment_schedule = random_schedule(rng);
        z.lighting_schedule = random_schedule(rng);
        z.infiltration_ach = u(rng, 0, 2);
        z.vent_ach = u(rng, 0, 8);
        p.zone_uses["s" + std::to_string(i)] = z;
    }

    const ComfortModel comforts[] = {ComfortModel::en15251(pick(rng, 1, 3)), ComfortModel::ashrae55(coin(rng) ? 80 : 90),
                                     ComfortModel::fixed(pick(rng, 17, 21) + 0.5, pick(rng, 24, 28) + 0.25)};
    p.comfort = comforts[pick(rng, 0, 2)];
    p.heating_weight = u(rng, 0, 3);
    p.cooling_weight = u(rng, 0, 3);
    if (coin(rng)) p.weather = "w0123456789abcdef";

    const int nsol = pick(rng, 0, 3);
    for (int i = 0; i < nsol; ++i) {
        Solution s;
        s.id = p.id + "-s" + std::to_string(i + 1);
        s.building = random_building(rng);
        if (coin(rng, 0.7)) {
            PerformanceVector v;
            for (auto& x : v.values) x = coin(rng, 0.5) ? 0.0 : u(rng, 0, 50);
            s.performance = v;
            s.objective = u(rng, 0, 500);
        }
        if (coin(rng)) {
            DiscomfortResult d;
            for (const auto& plan : s.building.plans) {
                for (const auto& sp : plan.spaces) {
                    d.spaces.push_back({sp.id, u(rng, 0, 3000), u(rng, 0, 3000)});
                    d.heating_total += d.spaces.back().heating_dh;
                    d.cooling_total += d.spaces.back().cooling_dh;
                }
            }
            s.discomfort = d;
            s.assessed_with = AssessmentRef{"wfeedfacecafebeef", p.comfort};
        }
        if (coin(rng, 0.3)) {
            OptTrace t;
            t.initial_objective = u(rng, 100, 200);
            double obj = t.initial_objective;
            const int ns = pick(rng, 1, 4);
            for (int k = 0; k < ns; ++k) {
                TraceStep st;
                st.variable.kind = all[static_cast<std::size_t>(pick(rng, 0, 7))];
                st.variable.space_id = "s0";
                st.variable.opening_index = pick(rng, -1, 2);
                st.variable.storey = pick(rng, 0, 2);
                st.variable.axis = coin(rng) ? WallAxis::X : WallAxis::Y;
                st.variable.coordinate = u(rng, -5, 5);
                st.variable.right_fin = coin(rng);
                st.candidates = {0.0, 0.5, 1.0};
                st.objectives = {obj, coin(rng) ? std::numeric_limits<double>::quiet_NaN() : obj - 1.0, obj - 0.5};
                st.current = 0.0;
                st.chosen = 1.0;
                st.objective_before = obj;
                obj -= 0.5;
                st.objective_after = obj;
                st.status = static_cast<StepStatus>(pick(rng, 0, 2));
                t.steps.push_back(st);
            }
            t.final_objective = obj;
            t.passes = pick(rng, 1, 3);
            s.trace = t;
            s.source = p.id + "-s0";
        }
        p.solutions.push_back(std::move(s));
    }
    return p;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testing
