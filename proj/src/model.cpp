#include "planforge/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace planforge {

namespace {

constexpr std::array<std::string_view, 8> kFunctionNames = {"bedroom", "living",   "kitchen", "bathroom",
                                                            "hall",    "corridor", "stair",   "other"};
constexpr std::array<std::string_view, kElementKindCount> kElementNames = {
    "exterior_wall", "interior_wall", "ceiling", "pavement", "window", "door"};

}  // namespace

std::string_view function_name(SpaceFunction f) { return kFunctionNames[static_cast<std::size_t>(f)]; }

SpaceFunction function_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kFunctionNames.size(); ++i) {
        if (kFunctionNames[i] == name) return static_cast<SpaceFunction>(i);
    }
    throw std::invalid_argument("unknown space function '" + std::string(name) + "'");
}

bool is_circulation(SpaceFunction f) {
    return f == SpaceFunction::Hall || f == SpaceFunction::Corridor || f == SpaceFunction::Stair;
}

std::string_view element_name(ElementKind k) { return kElementNames[static_cast<std::size_t>(k)]; }

ElementKind element_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kElementNames.size(); ++i) {
        if (kElementNames[i] == name) return static_cast<ElementKind>(i);
    }
    throw std::invalid_argument("unknown element kind '" + std::string(name) + "'");
}

double Assembly::heat_capacity_per_area() const {
    double c = 0.0;
    for (const auto& l : layers) c += l.density * l.specific_heat * l.thickness;
    return c;
}

std::vector<std::string> assembly_issues(const Assembly& a) {
    std::vector<std::string> issues;
    if (a.glazing) {
        if (!(a.glazing->u_value > 0.0)) issues.emplace_back("glazing u_value must be > 0");
        if (!(a.glazing->shgc >= 0.0 && a.glazing->shgc <= 1.0)) issues.emplace_back("glazing shgc must be in [0,1]");
        return issues;
    }
    if (a.layers.empty()) issues.emplace_back("opaque assembly needs at least one layer");
    for (const auto& l : a.layers) {
        if (!(l.thickness > 0.0)) issues.emplace_back("layer thickness must be > 0");
        if (!(l.conductivity > 0.0)) issues.emplace_back("layer conductivity must be > 0");
        if (!(l.density >= 0.0) || !(l.specific_heat >= 0.0)) issues.emplace_back("layer density/specific heat must be >= 0");
    }
    return issues;
}

ConstructionSet default_constructions() {
    ConstructionSet c;
    // plaster | brick | insulation | brick | plaster
    c[ElementKind::ExteriorWall].layers = {{0.015, 0.57, 1100, 1000},
                                           {0.11, 0.45, 1100, 840},
                                           {0.04, 0.037, 30, 1400},
                                           {0.11, 0.45, 1100, 840},
                                           {0.015, 0.57, 1100, 1000}};
    c[ElementKind::InteriorWall].layers = {{0.015, 0.57, 1100, 1000}, {0.11, 0.45, 1100, 840}, {0.015, 0.57, 1100, 1000}};
    c[ElementKind::Ceiling].layers = {{0.015, 0.57, 1100, 1000}, {0.20, 1.3, 1800, 1000}, {0.05, 1.3, 2000, 1000}};
    c[ElementKind::Pavement].layers = {{0.02, 1.3, 2300, 840}, {0.05, 1.3, 2000, 1000}, {0.20, 1.3, 1800, 1000}};
    c[ElementKind::Window].glazing = Glazing{2.8, 0.6};
    c[ElementKind::Door].layers = {{0.04, 0.15, 600, 1600}};
    return c;
}

const Assembly& Space::assembly(ElementKind k, const ConstructionSet& defaults) const {
    if (auto it = construction_overrides.find(k); it != construction_overrides.end()) return it->second;
    return defaults[k];
}

const Space* Building::find_space(std::string_view id) const {
    for (const auto& plan : plans) {
        for (const auto& s : plan.spaces) {
            if (s.id == id) return &s;
        }
    }
    return nullptr;
}

Space* Building::find_space(std::string_view id) {
    return const_cast<Space*>(static_cast<const Building&>(*this).find_space(id));
}

std::size_t Building::space_count() const {
    std::size_t n = 0;
    for (const auto& p : plans) n += p.spaces.size();
    return n;
}

Point2 opening_center(const Rect& host, const Opening& o) {
    const Segment w = wall_segment(host, o.side);
    const double t = o.offset + 0.5 * o.width;
    if (o.side == Side::N || o.side == Side::S) return {w.a.x + t, w.a.y};
    return {w.a.x, w.a.y + t};
}

std::vector<std::string> building_issues(const Building& b) {
    std::vector<std::string> issues;
    for (auto& i : boundary_issues(b.boundary)) issues.push_back(std::move(i));
    if (b.storey_count < 1) issues.emplace_back("storey_count must be >= 1");
    if (!(b.storey_height > 0.0)) issues.emplace_back("storey_height must be > 0");
    if (static_cast<int>(b.plans.size()) != b.storey_count) issues.emplace_back("plans must list one floor plan per storey");
    if (!(b.orientation >= 0.0 && b.orientation < 360.0)) issues.emplace_back("orientation must be in [0, 360)");
    for (int e : b.party_edges) {
        if (e < 0 || e >= static_cast<int>(b.boundary.edge_count()))
            issues.push_back("party edge " + std::to_string(e) + " out of range");
    }
    for (std::size_t k = 0; k < kElementKindCount; ++k) {
        const auto kind = static_cast<ElementKind>(k);
        const Assembly& a = b.constructions[kind];
        const bool want_glazing = kind == ElementKind::Window;
        if (a.is_glazing() != want_glazing)
            issues.push_back(std::string(element_name(kind)) + (want_glazing ? " must be glazing" : " must be opaque"));
        for (auto& i : assembly_issues(a)) issues.push_back(std::string(element_name(kind)) + ": " + i);
    }
    std::set<std::string> ids;
    for (std::size_t p = 0; p < b.plans.size(); ++p) {
        const auto& plan = b.plans[p];
        if (plan.storey != static_cast<int>(p)) issues.push_back("plan " + std::to_string(p) + " has storey index mismatch");
        for (const auto& s : plan.spaces) {
            if (!ids.insert(s.id).second) issues.push_back("duplicate space id '" + s.id + "'");
            if (s.storey != plan.storey) issues.push_back("space '" + s.id + "' storey differs from its plan");
            if (!(s.rect.width > 0.0) || !(s.rect.height > 0.0)) issues.push_back("space '" + s.id + "' has empty rect");
            for (std::size_t k = 0; k < s.openings.size(); ++k) {
                const auto& o = s.openings[k];
                const std::string tag = "opening " + std::to_string(k) + " of '" + s.id + "'";
                if (!(o.width > 0.0)) issues.push_back(tag + " has width <= 0");
                if (o.offset < -kGeomEps || opening_end(o) > wall_length(s.rect, o.side) + 1e-6)
                    issues.push_back(tag + " exceeds its wall");
                if (o.overhang_depth < 0.0 || o.fin_depth_left < 0.0 || o.fin_depth_right < 0.0)
                    issues.push_back(tag + " has negative shading depth");
                if (o.kind == OpeningKind::Door && o.sill != 0.0) issues.push_back(tag + " is a door with non-zero sill");
            }
        }
    }
    return issues;
}

}  // namespace planforge
