#include "planforge/program.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace planforge {

double sector_deviation(double azimuth, const Sector& s) {
    const double excess = std::max(0.0, angular_distance(azimuth, s.center) - s.half_width);
    return std::min(1.0, excess / 90.0);
}

const SpaceRequirement* DesignProgram::find_requirement(std::string_view id) const {
    for (const auto& r : space_reqs) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

std::vector<std::string> validate_program(const DesignProgram& p) {
    std::vector<std::string> issues;
    for (auto& i : boundary_issues(p.boundary)) issues.push_back(std::move(i));
    if (p.storey_count < 1) issues.emplace_back("storey_count must be >= 1");
    if (!(p.storey_height > 0.0)) issues.emplace_back("storey_height must be > 0");
    if (!(p.gross_area_limit > 0.0)) issues.emplace_back("gross_area_limit must be > 0");
    if (!(p.construction_area_limit > 0.0)) issues.emplace_back("construction_area_limit must be > 0");
    if (!(p.openings.min_door_width > 0.0)) issues.emplace_back("min_door_width must be > 0");
    if (!(p.openings.min_window_width > 0.0)) issues.emplace_back("min_window_width must be > 0");
    const double wfr = p.openings.window_to_floor_ratio_min;
    if (!(wfr > 0.0 && wfr < 1.0)) issues.emplace_back("window_to_floor_ratio_min must be in (0, 1)");
    if (p.space_reqs.empty()) issues.emplace_back("program declares no spaces");

    for (int e : p.neighbor_sides) {
        if (e < 0 || e >= static_cast<int>(p.boundary.vertices.size()))
            issues.push_back("neighbor side " + std::to_string(e) + " is not a boundary edge");
    }

    std::set<std::string> ids;
    std::map<int, double> min_area_by_storey;
    for (const auto& r : p.space_reqs) {
        if (r.id.empty()) issues.emplace_back("space requirement with empty id");
        if (!ids.insert(r.id).second) issues.push_back("duplicate space id '" + r.id + "'");
        if (r.storey < 0 || r.storey >= p.storey_count)
            issues.push_back("space '" + r.id + "' storey " + std::to_string(r.storey) + " out of range");
        if (!(r.area_min > 0.0)) issues.push_back("space '" + r.id + "' area min must be > 0");
        if (r.area_min > r.area_max) issues.push_back("space '" + r.id + "' area min exceeds max");
        if (!(r.min_dimension > 0.0)) issues.push_back("space '" + r.id + "' min_dimension must be > 0");
        else if (r.min_dimension * r.min_dimension > r.area_max)
            issues.push_back("space '" + r.id + "' min_dimension squared exceeds area max");
        min_area_by_storey[r.storey] += r.area_min;
    }
    for (const auto& a : p.adjacency_reqs) {
        for (const auto* ref : {&a.a, &a.b}) {
            if (!ids.contains(*ref)) issues.push_back("adjacency references unknown space '" + *ref + "'");
        }
        if (a.a == a.b) issues.push_back("adjacency of '" + a.a + "' with itself");
    }
    for (const auto& [storey, total] : min_area_by_storey) {
        if (total > p.gross_area_limit + 1e-9) {
            std::ostringstream msg;
            msg << "storey " << storey << " minimum areas sum to " << total << " m2, above gross area limit "
                << p.gross_area_limit << " m2";
            issues.push_back(msg.str());
        }
    }
    for (std::size_t k = 0; k < kElementKindCount; ++k) {
        const auto kind = static_cast<ElementKind>(k);
        const Assembly& a = p.site.constructions[kind];
        if (a.is_glazing() != (kind == ElementKind::Window))
            issues.push_back(std::string(element_name(kind)) + " construction has the wrong assembly type");
        for (auto& i : assembly_issues(a)) issues.push_back(std::string(element_name(kind)) + ": " + i);
    }
    if (!(p.site.orientation >= 0.0 && p.site.orientation < 360.0)) issues.emplace_back("site orientation must be in [0, 360)");
    return issues;
}

}  // namespace planforge
