#include "planforge/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "planforge/simd/kernels.hpp"

namespace planforge {

namespace {

constexpr std::array<std::string_view, kIndicatorCount> kNames = {
    "floorplan.areas_limits",
    "floorplan.circulation",
    "floorplan.areas_maximization",
    "floorplan.boundary_usage",
    "space.connectivity_adjacency",
    "space.overlap",
    "space.orientation",
    "space.overflow",
    "space.compactness",
    "space.area_dims",
    "space.absolute_position",
    "openings.absolute_position",
    "openings.orientation",
    "openings.overlap",
    "openings.width_and_wfr",
};

constexpr std::array<Indicator, kIndicatorCount> kAll = {
    Indicator::AreasLimits,        Indicator::Circulation,     Indicator::AreasMaximization,
    Indicator::BoundaryUsage,      Indicator::ConnectivityAdjacency, Indicator::SpaceOverlap,
    Indicator::SpaceOrientation,   Indicator::Overflow,        Indicator::Compactness,
    Indicator::AreaDims,           Indicator::SpacePosition,   Indicator::OpeningPosition,
    Indicator::OpeningOrientation, Indicator::OpeningOverlap,  Indicator::WidthAndWfr,
};

// Lookup tables shared by the three evaluators.
struct Index {
    std::unordered_map<std::string_view, const Space*> primary;  // requirement id -> primary instance
    std::unordered_map<std::string_view, const SpaceRequirement*> reqs;

    Index(const Building& b, const DesignProgram& p) {
        for (const auto& r : p.space_reqs) reqs.emplace(r.id, &r);
        for (const auto& plan : b.plans) {
            for (const auto& s : plan.spaces) {
                if (s.requirement.empty()) continue;
                auto [it, inserted] = primary.emplace(s.requirement, &s);
                if (!inserted && s.id == s.requirement) it->second = &s;
            }
        }
    }

    const SpaceRequirement* requirement_of(const Space& s) const {
        auto it = reqs.find(s.requirement);
        return it == reqs.end() ? nullptr : it->second;
    }
    const Space* instance(std::string_view req) const {
        auto it = primary.find(req);
        return it == primary.end() ? nullptr : it->second;
    }
};

double positive(double x) { return x > kGeomEps ? x : 0.0; }

// Best (smallest) sector deviation over the space's exterior walls; 1 if none.
double exterior_orientation_deviation(const Space& s, const Building& b, const Sector& pref) {
    double best = 1.0;
    for (Side side : {Side::N, Side::E, Side::S, Side::W}) {
        const double len = wall_length(s.rect, side);
        if (boundary_contact_length(s.rect, side, 0.0, len, b.boundary, b.party_edges) <= kGeomEps) continue;
        best = std::min(best, sector_deviation(wall_azimuth(side, b.orientation), pref));
    }
    return best;
}

double storey_height_offset(int a, int b) { return std::abs(a - b); }

// Length of the door's wall interval lying on the partner's facing wall.
double door_contact(const Space& host, const Opening& door, const Space& partner) {
    const Side facing = opposite(door.side);
    const Segment hw = wall_segment(host.rect, door.side);
    const Segment pw = wall_segment(partner.rect, facing);
    const bool horizontal = door.side == Side::N || door.side == Side::S;
    if (horizontal) {
        if (std::abs(hw.a.y - pw.a.y) > kGeomEps) return 0.0;
        return overlap_length(hw.a.x + door.offset, hw.a.x + opening_end(door), pw.a.x, pw.b.x);
    }
    if (std::abs(hw.a.x - pw.a.x) > kGeomEps) return 0.0;
    return overlap_length(hw.a.y + door.offset, hw.a.y + opening_end(door), pw.a.y, pw.b.y);
}

double distance_to_exterior(Point2 p, const Building& b) {
    double best = -1.0;
    for (std::size_t i = 0; i < b.boundary.edge_count(); ++i) {
        if (std::find(b.party_edges.begin(), b.party_edges.end(), static_cast<int>(i)) != b.party_edges.end()) continue;
        const double d = point_segment_distance(p, b.boundary.edge(i));
        if (best < 0.0 || d < best) best = d;
    }
    return best < 0.0 ? 0.0 : best;
}

}  // namespace

std::string_view indicator_name(Indicator i) { return kNames[static_cast<std::size_t>(i)]; }

std::optional<Indicator> indicator_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kIndicatorCount; ++i) {
        if (kNames[i] == name) return static_cast<Indicator>(i);
    }
    return std::nullopt;
}

const std::array<Indicator, kIndicatorCount>& all_indicators() { return kAll; }

Weights Weights::defaults() {
    Weights w = uniform(1.0);
    w[Indicator::SpaceOverlap] = 10.0;
    w[Indicator::Overflow] = 10.0;
    return w;
}

Weights Weights::uniform(double v) {
    Weights w;
    w.values.fill(v);
    return w;
}

std::string ObjectRef::to_string() const {
    if (opening_index < 0) return space_id;
    return space_id + ":" + std::to_string(opening_index);
}

const Space* primary_instance(const Building& b, std::string_view requirement_id) {
    const Space* first = nullptr;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) {
            if (s.requirement != requirement_id) continue;
            if (s.id == requirement_id) return &s;
            if (!first) first = &s;
        }
    }
    return first;
}

FloorplanPenalties eval_floorplan_penalties(const Building& b, const DesignProgram& p) {
    FloorplanPenalties out;
    const double boundary_area = b.boundary.area();
    std::vector<Rect> rects;
    for (const auto& plan : b.plans) {
        rects.clear();
        double allocated = 0.0;
        for (const auto& s : plan.spaces) {
            rects.push_back(s.rect);
            allocated += s.rect.area();
            if (s.circulation()) out.circulation += s.rect.area();
        }
        const double gross = union_area(rects);
        out.areas_limits += positive(gross - p.gross_area_limit) + positive(allocated - p.construction_area_limit);
        out.areas_maximization += positive(p.gross_area_limit - gross);
        out.boundary_usage += positive(boundary_area - covered_area(rects, b.boundary));
    }
    return out;
}

SpacePenalties eval_space_penalties(const Building& b, const DesignProgram& p, const Weights& w) {
    SpacePenalties out;
    const Index idx(b, p);
    std::map<std::string_view, double> dev;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) dev[s.id] = 0.0;
    }

    // overlap, overflow, compactness, per storey
    simd::RectColumns cols;
    std::vector<double> ov;
    for (const auto& plan : b.plans) {
        const auto& sp = plan.spaces;
        cols.clear();
        for (const auto& s : sp) cols.push_back(s.rect);
        ov.assign(sp.size(), 0.0);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            simd::overlap_areas(sp[i].rect, cols, ov);
            for (std::size_t j = i + 1; j < sp.size(); ++j) {
                if (ov[j] <= 0.0) continue;
                out.overlap += ov[j];
                dev[sp[i].id] += w[Indicator::SpaceOverlap] * ov[j];
                dev[sp[j].id] += w[Indicator::SpaceOverlap] * ov[j];
            }
            const double spill = outside_area(sp[i].rect, b.boundary);
            out.overflow += spill;
            dev[sp[i].id] += w[Indicator::Overflow] * spill;
            const double loose = std::max(0.0, 1.0 - compactness(sp[i].rect));
            out.compactness += loose;
            dev[sp[i].id] += w[Indicator::Compactness] * loose;
        }
    }

    // connectivity and adjacency
    const double door_w = p.openings.min_door_width;
    for (const auto& adj : p.adjacency_reqs) {
        const Space* a = idx.instance(adj.a);
        const Space* c = idx.instance(adj.b);
        if (!a || !c) continue;
        double term = 0.0;
        const double gap = rect_distance(a->rect, c->rect) + storey_height_offset(a->storey, c->storey) * b.storey_height;
        if (gap > 0.0) {
            term = gap;
        } else {
            const double contact = shared_edge_length(a->rect, c->rect);
            if (contact + kGeomEps < door_w) term = door_w - contact;
        }
        out.connectivity_adjacency += term;
        dev[a->id] += w[Indicator::ConnectivityAdjacency] * term;
        dev[c->id] += w[Indicator::ConnectivityAdjacency] * term;
    }
    // vertical stair alignment between consecutive storeys
    {
        std::vector<const Space*> stairs(b.plans.size(), nullptr);
        for (std::size_t k = 0; k < b.plans.size(); ++k) {
            for (const auto& s : b.plans[k].spaces) {
                if (s.function == SpaceFunction::Stair && (!stairs[k] || s.id < stairs[k]->id)) stairs[k] = &s;
            }
        }
        for (std::size_t k = 0; k + 1 < stairs.size(); ++k) {
            if (!stairs[k] || !stairs[k + 1]) continue;
            const Point2 c0 = stairs[k]->rect.centroid(), c1 = stairs[k + 1]->rect.centroid();
            const double d = positive(std::hypot(c0.x - c1.x, c0.y - c1.y));
            out.connectivity_adjacency += d;
            dev[stairs[k]->id] += w[Indicator::ConnectivityAdjacency] * d;
            dev[stairs[k + 1]->id] += w[Indicator::ConnectivityAdjacency] * d;
        }
    }

    // orientation, area and dimensions, absolute position
    std::map<std::string_view, int> instance_count;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) {
            const SpaceRequirement* req = idx.requirement_of(s);
            if (!req) {
                const double surplus = 1.0 + s.rect.area();
                out.area_dims += surplus;
                dev[s.id] += w[Indicator::AreaDims] * surplus;
                continue;
            }
            ++instance_count[req->id];
            if (idx.instance(req->id) != &s) {
                const double surplus = 1.0 + s.rect.area() / req->area_max;
                out.area_dims += surplus;
                dev[s.id] += w[Indicator::AreaDims] * surplus;
                continue;
            }
            if (req->orientation_pref) {
                const double d = exterior_orientation_deviation(s, b, *req->orientation_pref);
                out.orientation += d;
                dev[s.id] += w[Indicator::SpaceOrientation] * d;
            }
            const double a = s.rect.area();
            double area_dev = 0.0;
            if (a < req->area_min - kGeomEps) area_dev += (req->area_min - a) / req->area_min;
            else if (a > req->area_max + kGeomEps) area_dev += (a - req->area_max) / req->area_max;
            area_dev += positive(req->min_dimension - std::min(s.rect.width, s.rect.height));
            out.area_dims += area_dev;
            dev[s.id] += w[Indicator::AreaDims] * area_dev;
            if (req->position_pref) {
                const Point2 c = s.rect.centroid();
                const double d = positive(std::hypot(c.x - req->position_pref->x, c.y - req->position_pref->y));
                out.absolute_position += d;
                dev[s.id] += w[Indicator::SpacePosition] * d;
            }
        }
    }
    for (const auto& r : p.space_reqs) {
        if (!instance_count.contains(r.id)) out.area_dims += kMissingSpaceBase + r.area_min;
    }

    out.per_space.reserve(dev.size());
    for (const auto& [id, d] : dev) out.per_space.push_back({ObjectRef{std::string(id), -1}, d});
    return out;
}

OpeningPenalties eval_opening_penalties(const Building& b, const DesignProgram& p, const Weights& w) {
    OpeningPenalties out;
    const Index idx(b, p);
    const double wfr_min = p.openings.window_to_floor_ratio_min;
    for (const auto& plan : b.plans) {
        for (const auto& s : plan.spaces) {
            const SpaceRequirement* req = idx.requirement_of(s);
            std::vector<double> dev(s.openings.size(), 0.0);
            double window_area = 0.0;
            std::size_t windows = 0;
            for (std::size_t k = 0; k < s.openings.size(); ++k) {
                const Opening& o = s.openings[k];
                const bool is_window = o.kind == OpeningKind::Window;
                const double min_w = is_window ? p.openings.min_window_width : p.openings.min_door_width;
                const double shortfall = positive(min_w - o.width);
                out.width_and_wfr += shortfall;
                dev[k] += w[Indicator::WidthAndWfr] * shortfall;
                if (is_window) {
                    window_area += o.width * o.height;
                    ++windows;
                    if (req && req->window_orientation_pref) {
                        const double d = sector_deviation(wall_azimuth(o.side, b.orientation), *req->window_orientation_pref);
                        out.orientation += d;
                        dev[k] += w[Indicator::OpeningOrientation] * d;
                    }
                    const double on_facade =
                        boundary_contact_length(s.rect, o.side, o.offset, opening_end(o), b.boundary, b.party_edges);
                    const double d = positive(distance_to_exterior(opening_center(s.rect, o), b)) + positive(o.width - on_facade);
                    out.absolute_position += d;
                    dev[k] += w[Indicator::OpeningPosition] * d;
                } else if (!o.connects_to.empty()) {
                    const Space* partner = b.find_space(o.connects_to);
                    double d = o.width;
                    if (partner && partner->storey == s.storey) {
                        d = positive(point_rect_distance(opening_center(s.rect, o), partner->rect)) +
                            positive(o.width - door_contact(s, o, *partner));
                    }
                    out.absolute_position += d;
                    dev[k] += w[Indicator::OpeningPosition] * d;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    const Opening& q = s.openings[j];
                    if (q.side != o.side) continue;
                    const double lap = overlap_length(o.offset, opening_end(o), q.offset, opening_end(q));
                    out.overlap += lap;
                    dev[k] += w[Indicator::OpeningOverlap] * lap;
                    dev[j] += w[Indicator::OpeningOverlap] * lap;
                }
            }
            if (req && req->window_required) {
                const double deficit = positive(wfr_min - window_area / s.rect.area());
                out.width_and_wfr += deficit;
                if (deficit > 0.0) {
                    if (windows == 0) {
                        out.per_opening.push_back({ObjectRef{s.id, -1}, w[Indicator::WidthAndWfr] * deficit});
                    } else {
                        for (std::size_t k = 0; k < s.openings.size(); ++k) {
                            if (s.openings[k].kind == OpeningKind::Window) dev[k] += w[Indicator::WidthAndWfr] * (deficit / static_cast<double>(windows));
                        }
                    }
                }
            }
            for (std::size_t k = 0; k < dev.size(); ++k) out.per_opening.push_back({ObjectRef{s.id, static_cast<int>(k)}, dev[k]});
        }
    }
    return out;
}

Evaluation evaluate_detailed(const Building& b, const DesignProgram& p, const Weights& w) {
    Evaluation e;
    const FloorplanPenalties f = eval_floorplan_penalties(b, p);
    SpacePenalties s = eval_space_penalties(b, p, w);
    OpeningPenalties o = eval_opening_penalties(b, p, w);
    auto& v = e.perf;
    v[Indicator::AreasLimits] = f.areas_limits;
    v[Indicator::Circulation] = f.circulation;
    v[Indicator::AreasMaximization] = f.areas_maximization;
    v[Indicator::BoundaryUsage] = f.boundary_usage;
    v[Indicator::ConnectivityAdjacency] = s.connectivity_adjacency;
    v[Indicator::SpaceOverlap] = s.overlap;
    v[Indicator::SpaceOrientation] = s.orientation;
    v[Indicator::Overflow] = s.overflow;
    v[Indicator::Compactness] = s.compactness;
    v[Indicator::AreaDims] = s.area_dims;
    v[Indicator::SpacePosition] = s.absolute_position;
    v[Indicator::OpeningPosition] = o.absolute_position;
    v[Indicator::OpeningOrientation] = o.orientation;
    v[Indicator::OpeningOverlap] = o.overlap;
    v[Indicator::WidthAndWfr] = o.width_and_wfr;

    std::map<ObjectRef, double> merged;
    for (auto& d : s.per_space) merged[std::move(d.object)] += d.deviation;
    for (auto& d : o.per_opening) merged[std::move(d.object)] += d.deviation;
    e.deviations.reserve(merged.size());
    for (auto& [ref, d] : merged) e.deviations.push_back({ref, d});
    return e;
}

PerformanceVector evaluate(const Building& b, const DesignProgram& p) { return evaluate_detailed(b, p, Weights::uniform(1.0)).perf; }

double aggregate(const PerformanceVector& v, const Weights& w) {
    double total = 0.0;
    for (std::size_t i = 0; i < kIndicatorCount; ++i) total += w.values[i] * v.values[i];
    return total;
}

std::vector<ObjectDeviation> nonconformity_ranking(std::vector<ObjectDeviation> devs) {
    std::stable_sort(devs.begin(), devs.end(), [](const ObjectDeviation& a, const ObjectDeviation& b) {
        if (a.deviation != b.deviation) return a.deviation > b.deviation;
        return a.object < b.object;
    });
    return devs;
}

double feasibility_penalty(const PerformanceVector& v) { return v[Indicator::SpaceOverlap] + v[Indicator::Overflow]; }

}  // namespace planforge
