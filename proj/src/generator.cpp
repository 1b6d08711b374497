#include "planforge/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <thread>

namespace planforge {

namespace {

constexpr std::array<std::string_view, kTransformKindCount> kTransformNames = {"move",  "rotate", "stretch", "mirror",
                                                                               "slice", "swap",   "wall_shift"};
constexpr std::array<Side, 4> kSides = {Side::N, Side::E, Side::S, Side::W};

struct Located {
    Space* space = nullptr;
    FloorPlan* plan = nullptr;
    std::size_t index = 0;
};

Located locate(Building& b, std::string_view id) {
    for (auto& plan : b.plans) {
        for (std::size_t i = 0; i < plan.spaces.size(); ++i) {
            if (plan.spaces[i].id == id) return {&plan.spaces[i], &plan, i};
        }
    }
    return {};
}

const Space* find_const(const Building& b, std::string_view id) { return b.find_space(id); }

double min_dimension_of(const Space& s, const DesignProgram& p) {
    if (const auto* r = p.find_requirement(s.requirement)) return r->min_dimension;
    return 0.5;
}

double round_to(double v, double grid) { return grid > 0.0 ? std::round(v / grid) * grid : v; }

bool openings_fit(const Space& s) {
    for (const auto& o : s.openings) {
        if (o.offset < -1e-9 || opening_end(o) > wall_length(s.rect, o.side) + 1e-9 || o.width <= 0.0) return false;
    }
    return true;
}

bool dims_ok(const Space& s, const DesignProgram& p) {
    const double md = min_dimension_of(s, p) - 1e-9;
    return s.rect.width >= md && s.rect.height >= md;
}

// Offsets on walls whose length changed are rescaled, then clamped onto the wall.
bool refit_openings(Space& s, const Rect& old) {
    for (auto& o : s.openings) {
        const double before = wall_length(old, o.side);
        const double after = wall_length(s.rect, o.side);
        if (std::abs(before - after) > 1e-12 && before > 0.0) o.offset *= after / before;
        if (o.width > after + 1e-9) return false;
        o.offset = std::clamp(o.offset, 0.0, std::max(0.0, after - o.width));
    }
    return true;
}

// Edge coordinates of the other spaces on a storey (plus the boundary), per axis.
void snap_candidates(const Building& b, const Space& self, bool x_axis, std::vector<double>& out) {
    out.clear();
    for (const auto& v : b.boundary.vertices) out.push_back(x_axis ? v.x : v.y);
    for (const auto& plan : b.plans) {
        const bool same = plan.storey == self.storey;
        for (const auto& s : plan.spaces) {
            if (s.id == self.id) continue;
            if (!same && !(self.function == SpaceFunction::Stair && s.function == SpaceFunction::Stair)) continue;
            if (x_axis) out.insert(out.end(), {s.rect.min_x(), s.rect.max_x()});
            else out.insert(out.end(), {s.rect.min_y(), s.rect.max_y()});
        }
    }
}

double snap_single(double v, const std::vector<double>& cands, const SnapSettings& snap) {
    double best = v, best_d = snap.snap_distance;
    bool found = false;
    for (double c : cands) {
        const double d = std::abs(c - v);
        if (d <= best_d) {
            best_d = d;
            best = c;
            found = true;
        }
    }
    return found ? best : round_to(v, snap.grid);
}

// Snap an interval [lo, lo + len] by whichever end is closest to a candidate.
double snap_interval(double lo, double len, const std::vector<double>& cands, const SnapSettings& snap) {
    double best_shift = 0.0, best_d = snap.snap_distance;
    bool found = false;
    for (double c : cands) {
        for (double end : {lo, lo + len}) {
            const double d = std::abs(c - end);
            if (d <= best_d) {
                best_d = d;
                best_shift = c - end;
                found = true;
            }
        }
    }
    return found ? lo + best_shift : round_to(lo, snap.grid);
}

Rect snap_position(const Building& b, const Space& s, Rect r, const SnapSettings& snap) {
    if (snap.grid <= 0.0 && snap.snap_distance <= 0.0) return r;
    std::vector<double> cands;
    snap_candidates(b, s, true, cands);
    r.min_corner.x = snap_interval(r.min_corner.x, r.width, cands, snap);
    snap_candidates(b, s, false, cands);
    r.min_corner.y = snap_interval(r.min_corner.y, r.height, cands, snap);
    return r;
}

void stretch_rect(Rect& r, Side wall, double d) {
    switch (wall) {
        case Side::N: r.height += d; break;
        case Side::S: r.min_corner.y -= d; r.height += d; break;
        case Side::E: r.width += d; break;
        case Side::W: r.min_corner.x -= d; r.width += d; break;
    }
}

double wall_coordinate(const Rect& r, Side wall) {
    switch (wall) {
        case Side::N: return r.max_y();
        case Side::S: return r.min_y();
        case Side::E: return r.max_x();
        case Side::W: return r.min_x();
    }
    return 0.0;
}

// Outward displacement d moves the wall coordinate by +d for N/E and -d for S/W.
double outward_sign(Side wall) { return (wall == Side::N || wall == Side::E) ? 1.0 : -1.0; }

std::string fresh_id(const Building& b, const std::string& base) {
    for (int n = 1;; ++n) {
        std::string id = base + "~" + std::to_string(n);
        if (!b.find_space(id)) return id;
    }
}

void retarget_doors(Building& b, const std::string& from, const std::string& to) {
    for (auto& plan : b.plans) {
        for (auto& s : plan.spaces) {
            for (auto& o : s.openings) {
                if (o.connects_to == from) o.connects_to = to;
            }
        }
    }
}

Point2 random_direction(Rng& rng, double length) {
    const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return {length * std::cos(a), length * std::sin(a)};
}

// A displacement that would reduce one nonconformity of a space, weighted by it.
struct Attractor {
    double deviation = 0.0;
    Point2 move;             // full translation that resolves it
    Side wall = Side::N;     // wall to push for a stretch
    double wall_shift = 0.0; // outward displacement of that wall
};

Side facing_side(const Rect& from, const Rect& to) {
    const Point2 a = from.centroid(), c = to.centroid();
    const double dx = c.x - a.x, dy = c.y - a.y;
    if (std::abs(dx) >= std::abs(dy)) return dx >= 0.0 ? Side::E : Side::W;
    return dy >= 0.0 ? Side::N : Side::S;
}

// Smallest translation of r that puts it against q with at least `need` of shared wall.
Point2 dock_move(const Rect& r, const Rect& q, double need) {
    auto along = [](double lo, double len, double qlo, double qlen, double want) {
        const double w = std::min({want, len, qlen});
        const double target = std::clamp(lo, qlo - len + w, qlo + qlen - w);
        return target - lo;
    };
    const double want = need + 0.2;
    const double to_left = q.min_x() - r.max_x(), to_right = q.max_x() - r.min_x();
    const double to_below = q.min_y() - r.max_y(), to_above = q.max_y() - r.min_y();
    const Point2 dock_x{std::abs(to_left) <= std::abs(to_right) ? to_left : to_right,
                        along(r.min_y(), r.height, q.min_y(), q.height, want)};
    const Point2 dock_y{along(r.min_x(), r.width, q.min_x(), q.width, want),
                        std::abs(to_below) <= std::abs(to_above) ? to_below : to_above};
    const double lx = std::abs(dock_x.x) + std::abs(dock_x.y), ly = std::abs(dock_y.x) + std::abs(dock_y.y);
    return lx <= ly ? dock_x : dock_y;
}

// Adjusts a translation so the moved rect clears the other spaces of its storey,
// resolving the deepest overlap along its shallowest axis a few times.
Point2 settle(const Building& b, const Space& s, Point2 move) {
    const Rect bb = b.boundary.bounding_box();
    const Point2 original = move;
    for (int iter = 0; iter < 4; ++iter) {
        Rect r = s.rect;
        r.min_corner.x += move.x;
        r.min_corner.y += move.y;
        const Rect* worst = nullptr;
        double worst_lap = 0.0;
        for (const auto& plan : b.plans) {
            if (plan.storey != s.storey) continue;
            for (const auto& o : plan.spaces) {
                if (o.id == s.id) continue;
                const double lap = overlap_area(r, o.rect);
                if (lap > worst_lap) {
                    worst_lap = lap;
                    worst = &o.rect;
                }
            }
        }
        if (!worst) return move;
        const Rect& q = *worst;
        struct Option {
            double dx, dy;
        };
        const std::array<Option, 4> options = {Option{q.min_x() - r.max_x(), 0.0}, Option{q.max_x() - r.min_x(), 0.0},
                                               Option{0.0, q.min_y() - r.max_y()}, Option{0.0, q.max_y() - r.min_y()}};
        const Option* pick = nullptr;
        for (const auto& opt : options) {
            const double nx = r.min_x() + opt.dx, ny = r.min_y() + opt.dy;
            const bool inside = nx >= bb.min_x() - kGeomEps && nx + r.width <= bb.max_x() + kGeomEps &&
                                ny >= bb.min_y() - kGeomEps && ny + r.height <= bb.max_y() + kGeomEps;
            if (!inside) continue;
            if (!pick || std::abs(opt.dx) + std::abs(opt.dy) < std::abs(pick->dx) + std::abs(pick->dy)) pick = &opt;
        }
        if (!pick) return original;
        move.x += pick->dx;
        move.y += pick->dy;
    }
    return original;
}

// Space-local share of the objective for a candidate rect of s.
// Rect of a space, honouring an optional override of one other space's rect.
struct RectOverride {
    const Space* space = nullptr;
    Rect rect;
};

const Rect& rect_of(const Space& o, const RectOverride& ov) { return &o == ov.space ? ov.rect : o.rect; }

double local_score(const Building& b, const DesignProgram& p, const Weights& w, const Space& s, const Rect& r,
                   const RectOverride& ov = {}) {
    double overlap = 0.0, conn = 0.0;
    for (const auto& plan : b.plans) {
        if (plan.storey != s.storey) continue;
        for (const auto& o : plan.spaces) {
            if (o.id != s.id) overlap += overlap_area(r, rect_of(o, ov));
        }
    }
    const double door_w = p.openings.min_door_width;
    for (const auto& adj : p.adjacency_reqs) {
        std::string_view other;
        if (adj.a == s.requirement) other = adj.b;
        else if (adj.b == s.requirement) other = adj.a;
        else continue;
        const Space* q = primary_instance(b, other);
        if (!q || q->storey != s.storey) continue;
        const Rect& qr = rect_of(*q, ov);
        const double gap = rect_distance(r, qr);
        if (gap > 0.0) conn += gap;
        else conn += std::max(0.0, door_w - shared_edge_length(r, qr));
    }
    if (s.function == SpaceFunction::Stair) {
        for (const auto& plan : b.plans) {
            if (std::abs(plan.storey - s.storey) != 1) continue;
            for (const auto& o : plan.spaces) {
                if (o.function != SpaceFunction::Stair) continue;
                const Point2 a = r.centroid(), c = o.rect.centroid();
                conn += std::hypot(a.x - c.x, a.y - c.y);
                break;
            }
        }
    }
    double pos = 0.0;
    if (const auto* req = p.find_requirement(s.requirement); req && req->position_pref) {
        const Point2 c = r.centroid();
        pos = std::hypot(c.x - req->position_pref->x, c.y - req->position_pref->y);
    }
    double dims = 0.0;
    if (const auto* req = p.find_requirement(s.requirement)) {
        const double a = r.area();
        if (a < req->area_min) dims += (req->area_min - a) / req->area_min;
        else if (a > req->area_max) dims += (a - req->area_max) / req->area_max;
        dims += std::max(0.0, req->min_dimension - std::min(r.width, r.height));
    }
    return w[Indicator::SpaceOverlap] * overlap + w[Indicator::Overflow] * outside_area(r, b.boundary) +
           w[Indicator::ConnectivityAdjacency] * conn + w[Indicator::SpacePosition] * pos + w[Indicator::AreaDims] * dims +
           w[Indicator::Compactness] * (1.0 - compactness(r));
}

// Wall and outward shift that best improves local_score, moving one wall onto a nearby edge.
std::optional<std::pair<Side, double>> stretch_search(const Building& b, const DesignProgram& p, const Weights& w,
                                                      const Space& s) {
    const Rect& r = s.rect;
    const double md = min_dimension_of(s, p);
    double best = local_score(b, p, w, s, r);
    std::optional<std::pair<Side, double>> out;
    std::vector<double> cands;
    for (Side side : kSides) {
        const bool vertical = side == Side::E || side == Side::W;
        snap_candidates(b, s, vertical, cands);
        const double coord = wall_coordinate(r, side);
        for (double c : cands) {
            if (std::abs(c - coord) < kGeomEps || std::abs(c - coord) > 3.0) continue;
            const double d = (c - coord) * outward_sign(side);
            Rect q = r;
            stretch_rect(q, side, d);
            if (q.width < md - 1e-9 || q.height < md - 1e-9) continue;
            const double sc = local_score(b, p, w, s, q) + 1e-3 * std::abs(d);
            if (sc < best - 1e-9) {
                best = sc;
                out = std::make_pair(side, d);
            }
        }
    }
    return out;
}

// Translation to the best position against one of the space's required partners
// (or under the neighbouring stairs), judged by local_score; none if nothing beats staying.
std::optional<Point2> dock_search(const Building& b, const DesignProgram& p, const Weights& w, const Space& s) {
    const Rect& r = s.rect;
    std::vector<Point2> corners;
    const double need = p.openings.min_door_width + 0.1;
    auto slide = [&](double fixed, bool fixed_is_x, double qlo, double qlen, double len) {
        const double lo = qlo - len + std::min(need, std::min(len, qlen));
        const double hi = qlo + qlen - std::min(need, std::min(len, qlen));
        const double here = fixed_is_x ? r.min_y() : r.min_x();
        const double kept = std::clamp(here, std::min(lo, hi), std::max(lo, hi));
        corners.push_back(fixed_is_x ? Point2{fixed, kept} : Point2{kept, fixed});
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
        for (int i = 0; i <= n; ++i) {
            const double t = lo + (hi - lo) * i / n;
            corners.push_back(fixed_is_x ? Point2{fixed, t} : Point2{t, fixed});
        }
        for (double t : {qlo, qlo + qlen - len}) corners.push_back(fixed_is_x ? Point2{fixed, t} : Point2{t, fixed});
    };
    for (const auto& adj : p.adjacency_reqs) {
        std::string_view other;
        if (adj.a == s.requirement) other = adj.b;
        else if (adj.b == s.requirement) other = adj.a;
        else continue;
        const Space* o = primary_instance(b, other);
        if (!o || o->storey != s.storey) continue;
        const Rect& q = o->rect;
        slide(q.max_x(), true, q.min_y(), q.height, r.height);
        slide(q.min_x() - r.width, true, q.min_y(), q.height, r.height);
        slide(q.max_y(), false, q.min_x(), q.width, r.width);
        slide(q.min_y() - r.height, false, q.min_x(), q.width, r.width);
    }
    if (s.function == SpaceFunction::Stair) {
        for (const auto& plan : b.plans) {
            if (std::abs(plan.storey - s.storey) != 1) continue;
            for (const auto& o : plan.spaces) {
                if (o.function != SpaceFunction::Stair) continue;
                const Point2 c = o.rect.centroid();
                corners.push_back({c.x - 0.5 * r.width, c.y - 0.5 * r.height});
                break;
            }
        }
    }
    if (corners.empty()) return std::nullopt;
    double best = local_score(b, p, w, s, r);
    std::optional<Point2> out;
    for (const Point2& m : corners) {
        const Rect cand = make_rect(m.x, m.y, r.width, r.height);
        const double sc = local_score(b, p, w, s, cand) + 1e-3 * (std::abs(m.x - r.min_x()) + std::abs(m.y - r.min_y()));
        if (sc < best - 1e-9) {
            best = sc;
            out = Point2{m.x - r.min_x(), m.y - r.min_y()};
        }
    }
    return out;
}

// Same-storey partner whose min-corner exchange most improves the two spaces' local scores.
std::optional<std::string> swap_search(const Building& b, const DesignProgram& p, const Weights& w, const Space& s,
                                       const SnapSettings& snap) {
    double best = 0.0;
    std::optional<std::string> out;
    for (const auto& plan : b.plans) {
        if (plan.storey != s.storey) continue;
        for (const auto& o : plan.spaces) {
            if (o.id == s.id) continue;
            const double before = local_score(b, p, w, s, s.rect) + local_score(b, p, w, o, o.rect);
            Rect rs = s.rect, ro = o.rect;
            std::swap(rs.min_corner, ro.min_corner);
            rs = snap_position(b, s, rs, snap);
            ro = snap_position(b, o, ro, snap);
            const double after = local_score(b, p, w, s, rs, {&o, ro}) + local_score(b, p, w, o, ro, {&s, rs});
            if (after - before < best - 1e-9) {
                best = after - before;
                out = o.id;
            }
        }
    }
    return out;
}

std::vector<Attractor> space_attractors(const Building& b, const DesignProgram& p, const Space& s) {
    std::vector<Attractor> out;
    const Rect& r = s.rect;
    const Point2 c = r.centroid();

    const double spill = outside_area(r, b.boundary);
    if (spill > 0.0) {
        const Rect bb = b.boundary.bounding_box();
        Attractor a;
        a.deviation = spill;
        if (r.min_x() < bb.min_x()) a.move.x = bb.min_x() - r.min_x();
        else if (r.max_x() > bb.max_x()) a.move.x = bb.max_x() - r.max_x();
        if (r.min_y() < bb.min_y()) a.move.y = bb.min_y() - r.min_y();
        else if (r.max_y() > bb.max_y()) a.move.y = bb.max_y() - r.max_y();
        if (a.move.x == 0.0 && a.move.y == 0.0) {
            const Point2 bc = b.boundary.centroid();
            const double dx = bc.x - c.x, dy = bc.y - c.y, len = std::hypot(dx, dy);
            const double step = std::sqrt(spill);
            if (len > 0.0) a.move = {dx / len * step, dy / len * step};
        }
        // Pull the wall that sticks out back in.
        if (a.move.x > 0.0) { a.wall = Side::W; a.wall_shift = -a.move.x; }
        else if (a.move.x < 0.0) { a.wall = Side::E; a.wall_shift = a.move.x; }
        else if (a.move.y > 0.0) { a.wall = Side::S; a.wall_shift = -a.move.y; }
        else { a.wall = Side::N; a.wall_shift = a.move.y; }
        out.push_back(a);
    }

    for (const auto& plan : b.plans) {
        if (plan.storey != s.storey) continue;
        for (const auto& o : plan.spaces) {
            if (o.id == s.id) continue;
            const double lap = overlap_area(r, o.rect);
            if (lap <= 0.0) continue;
            const double push_left = r.max_x() - o.rect.min_x();   // move -x by this
            const double push_right = o.rect.max_x() - r.min_x();  // move +x
            const double push_down = r.max_y() - o.rect.min_y();
            const double push_up = o.rect.max_y() - r.min_y();
            const double best = std::min({push_left, push_right, push_down, push_up});
            Attractor a;
            a.deviation = lap;
            if (best == push_left) { a.move = {-push_left, 0.0}; a.wall = Side::E; }
            else if (best == push_right) { a.move = {push_right, 0.0}; a.wall = Side::W; }
            else if (best == push_down) { a.move = {0.0, -push_down}; a.wall = Side::N; }
            else { a.move = {0.0, push_up}; a.wall = Side::S; }
            a.wall_shift = -best;
            out.push_back(a);
        }
    }

    const double door_w = p.openings.min_door_width;
    for (const auto& adj : p.adjacency_reqs) {
        std::string_view other;
        if (adj.a == s.requirement) other = adj.b;
        else if (adj.b == s.requirement) other = adj.a;
        else continue;
        if (primary_instance(b, s.requirement) != &s) continue;
        const Space* o = primary_instance(b, other);
        if (!o || o->storey != s.storey) continue;
        const Rect& q = o->rect;
        const double gap = rect_distance(r, q);
        Attractor a;
        if (gap > 0.0) {
            a.deviation = gap;
        } else {
            if (overlap_area(r, q) > 0.0) continue;  // handled by the overlap attractor
            const double contact = shared_edge_length(r, q);
            if (contact + kGeomEps >= door_w) continue;
            a.deviation = door_w - contact;
        }
        a.move = dock_move(r, q, door_w);
        a.wall = facing_side(r, q);
        a.wall_shift = std::abs(a.wall == Side::E || a.wall == Side::W ? a.move.x : a.move.y);
        out.push_back(a);
    }

    if (const auto* req = p.find_requirement(s.requirement); req && req->position_pref && primary_instance(b, req->id) == &s) {
        const double dx = req->position_pref->x - c.x, dy = req->position_pref->y - c.y;
        const double d = std::hypot(dx, dy);
        if (d > kGeomEps) {
            Attractor a;
            a.deviation = d;
            a.move = {dx, dy};
            a.wall = std::abs(dx) >= std::abs(dy) ? (dx > 0 ? Side::E : Side::W) : (dy > 0 ? Side::N : Side::S);
            a.wall_shift = 0.0;
            out.push_back(a);
        }
    }

    // Windows pull their host toward the nearest facade.
    for (const auto& o : s.openings) {
        if (o.kind != OpeningKind::Window) continue;
        const Point2 oc = opening_center(r, o);
        double best = -1.0;
        Point2 to;
        for (std::size_t i = 0; i < b.boundary.edge_count(); ++i) {
            if (std::find(b.party_edges.begin(), b.party_edges.end(), static_cast<int>(i)) != b.party_edges.end()) continue;
            const Segment e = b.boundary.edge(i);
            const Point2 q{std::clamp(oc.x, std::min(e.a.x, e.b.x), std::max(e.a.x, e.b.x)),
                           std::clamp(oc.y, std::min(e.a.y, e.b.y), std::max(e.a.y, e.b.y))};
            const double d = std::hypot(q.x - oc.x, q.y - oc.y);
            if (best < 0.0 || d < best) {
                best = d;
                to = {q.x - oc.x, q.y - oc.y};
            }
        }
        if (best > kGeomEps) {
            Attractor a;
            a.deviation = best;
            a.move = to;
            a.wall = o.side;
            a.wall_shift = 0.0;
            out.push_back(a);
        }
    }

    if (s.function == SpaceFunction::Stair) {
        double sx = 0.0, sy = 0.0;
        int n = 0;
        for (const auto& plan : b.plans) {
            if (std::abs(plan.storey - s.storey) != 1) continue;
            for (const auto& o : plan.spaces) {
                if (o.function != SpaceFunction::Stair) continue;
                const Point2 oc = o.rect.centroid();
                sx += oc.x;
                sy += oc.y;
                ++n;
                break;
            }
        }
        if (n > 0) {
            const double dx = sx / n - c.x, dy = sy / n - c.y;
            const double d = std::hypot(dx, dy);
            if (d > kGeomEps) {
                Attractor a;
                a.deviation = d;
                a.move = {dx, dy};
                a.wall = std::abs(dx) >= std::abs(dy) ? (dx > 0 ? Side::E : Side::W) : (dy > 0 ? Side::N : Side::S);
                out.push_back(a);
            }
        }
    }
    return out;
}

// Signed area deficit (positive: grow) and min-dimension shortfall of a space.
std::pair<double, double> area_deficit(const Space& s, const DesignProgram& p) {
    const auto* req = p.find_requirement(s.requirement);
    if (!req) return {0.0, 0.0};
    const double a = s.rect.area();
    double d = 0.0;
    if (a < req->area_min) d = req->area_min - a;
    else if (a > req->area_max) d = req->area_max - a;
    return {d, std::max(0.0, req->min_dimension - std::min(s.rect.width, s.rect.height))};
}

// Wall-local interval [lo, hi] where an opening would be well placed, if any.
std::optional<std::pair<double, double>> preferred_interval(const Building& b, const Space& s, const Opening& o) {
    const Segment w = wall_segment(s.rect, o.side);
    const bool horizontal = o.side == Side::N || o.side == Side::S;
    const double line = horizontal ? w.a.y : w.a.x;
    const double start = horizontal ? w.a.x : w.a.y;
    const double len = wall_length(s.rect, o.side);
    std::optional<std::pair<double, double>> best;
    auto consider = [&](double lo, double hi) {
        lo = std::max(lo, start) - start;
        hi = std::min(hi, start + len) - start;
        if (hi - lo <= kGeomEps) return;
        if (!best || hi - lo > best->second - best->first) best = std::make_pair(lo, hi);
    };
    if (o.kind == OpeningKind::Window) {
        for (std::size_t i = 0; i < b.boundary.edge_count(); ++i) {
            if (std::find(b.party_edges.begin(), b.party_edges.end(), static_cast<int>(i)) != b.party_edges.end()) continue;
            const Segment e = b.boundary.edge(i);
            if (horizontal && std::abs(e.a.y - e.b.y) < kGeomEps && std::abs(e.a.y - line) < kGeomEps)
                consider(std::min(e.a.x, e.b.x), std::max(e.a.x, e.b.x));
            if (!horizontal && std::abs(e.a.x - e.b.x) < kGeomEps && std::abs(e.a.x - line) < kGeomEps)
                consider(std::min(e.a.y, e.b.y), std::max(e.a.y, e.b.y));
        }
    } else if (!o.connects_to.empty()) {
        const Space* partner = b.find_space(o.connects_to);
        if (partner && partner->storey == s.storey) {
            const Segment pw = wall_segment(partner->rect, opposite(o.side));
            if (horizontal && std::abs(pw.a.y - line) < kGeomEps) consider(pw.a.x, pw.b.x);
            if (!horizontal && std::abs(pw.a.x - line) < kGeomEps) consider(pw.a.y, pw.b.y);
        }
    }
    return best;
}

// Side of a space that best suits an opening: facade for windows, partner for doors.
Side preferred_side(const Building& b, const Space& s, OpeningKind kind, const Space* partner) {
    if (kind == OpeningKind::Door && partner) return facing_side(s.rect, partner->rect);
    const Point2 c = s.rect.centroid();
    Side best = Side::S;
    double best_d = -1.0;
    for (Side side : kSides) {
        const Segment w = wall_segment(s.rect, side);
        for (std::size_t i = 0; i < b.boundary.edge_count(); ++i) {
            if (std::find(b.party_edges.begin(), b.party_edges.end(), static_cast<int>(i)) != b.party_edges.end()) continue;
            const Segment e = b.boundary.edge(i);
            const bool horizontal = side == Side::N || side == Side::S;
            const bool edge_h = std::abs(e.a.y - e.b.y) < kGeomEps;
            if (horizontal != edge_h) continue;
            // wall must face the edge
            const double gap = horizontal ? (e.a.y - w.a.y) : (e.a.x - w.a.x);
            const double sign = outward_sign(side);
            if (gap * sign < -kGeomEps) continue;
            const double d = point_segment_distance(c, e);
            if (best_d < 0.0 || d < best_d) {
                best_d = d;
                best = side;
            }
        }
    }
    return best;
}

}  // namespace

std::string_view transform_name(TransformKind k) { return kTransformNames[static_cast<std::size_t>(k)]; }

std::vector<std::string> config_issues(const GeneratorConfig& c) {
    std::vector<std::string> issues;
    if (c.lambda < 1) issues.emplace_back("lambda must be >= 1");
    if (c.max_evaluations < 0) issues.emplace_back("max_evaluations must be >= 0");
    if (c.transforms_min < 1 || c.transforms_max < c.transforms_min) issues.emplace_back("transforms range must satisfy 1 <= min <= max");
    if (!(c.greediness >= 0.0 && c.greediness <= 1.0)) issues.emplace_back("greediness must be in [0, 1]");
    if (!(c.ema_rate >= 0.0 && c.ema_rate <= 1.0)) issues.emplace_back("ema_rate must be in [0, 1]");
    if (!(c.weight_floor > 0.0)) issues.emplace_back("weight_floor must be > 0");
    if (c.stagnation_restart < 1) issues.emplace_back("stagnation_restart must be >= 1");
    if (c.grid < 0.0) issues.emplace_back("grid must be >= 0");
    if (c.snap_distance < 0.0) issues.emplace_back("snap_distance must be >= 0");
    if (c.workers < 1) issues.emplace_back("workers must be >= 1");
    return issues;
}

Individual make_individual(Building b, const DesignProgram& p, const Weights& w) {
    Individual ind;
    Evaluation e = evaluate_detailed(b, p, w);
    ind.perf = e.perf;
    ind.ranked = nonconformity_ranking(std::move(e.deviations));
    ind.objective = aggregate(ind.perf, w);
    ind.building = std::move(b);
    return ind;
}

Building init_building(const DesignProgram& p, Rng& rng, double grid) {
    Building b;
    b.boundary = p.boundary;
    b.storey_count = p.storey_count;
    b.storey_height = p.storey_height;
    b.orientation = p.site.orientation;
    b.party_edges = p.neighbor_sides;
    b.constructions = p.site.constructions;
    b.location = p.site.location;
    b.plans.resize(static_cast<std::size_t>(p.storey_count));
    for (int k = 0; k < p.storey_count; ++k) b.plans[static_cast<std::size_t>(k)].storey = k;

    const Rect bb = p.boundary.bounding_box();
    std::optional<Point2> stair_at;  // stairs stack on the first one placed
    for (const auto& req : p.space_reqs) {
        const double side = std::max(std::sqrt(req.area_min), req.min_dimension);
        Space s;
        s.id = req.id;
        s.requirement = req.id;
        s.function = req.function;
        s.function_tag = req.function_tag;
        s.storey = req.storey;
        const double x = round_to(uniform(rng, bb.min_x(), std::max(bb.min_x(), bb.max_x() - side)), grid);
        const double y = round_to(uniform(rng, bb.min_y(), std::max(bb.min_y(), bb.max_y() - side)), grid);
        s.rect = make_rect(x, y, side, side);
        if (req.function == SpaceFunction::Stair) {
            if (stair_at) {
                const double sx = std::clamp(stair_at->x - 0.5 * side, bb.min_x(), std::max(bb.min_x(), bb.max_x() - side));
                const double sy = std::clamp(stair_at->y - 0.5 * side, bb.min_y(), std::max(bb.min_y(), bb.max_y() - side));
                s.rect = make_rect(round_to(sx, grid), round_to(sy, grid), side, side);
            } else {
                stair_at = s.rect.centroid();
            }
        }
        b.plans[static_cast<std::size_t>(req.storey)].spaces.push_back(std::move(s));
    }
    for (const auto& req : p.space_reqs) {
        if (!req.window_required) continue;
        Space* s = b.find_space(req.id);
        Opening w;
        w.kind = OpeningKind::Window;
        w.side = preferred_side(b, *s, OpeningKind::Window, nullptr);
        w.width = std::min(p.openings.min_window_width, wall_length(s->rect, w.side));
        w.height = 1.2;
        w.sill = 0.9;
        w.offset = 0.5 * (wall_length(s->rect, w.side) - w.width);
        s->openings.push_back(w);
    }
    for (const auto& adj : p.adjacency_reqs) {
        if (adj.kind != AdjacencyKind::DoorConnected) continue;
        Space* host = b.find_space(adj.a);
        const Space* partner = b.find_space(adj.b);
        if (!host || !partner) continue;
        Opening d;
        d.kind = OpeningKind::Door;
        d.side = preferred_side(b, *host, OpeningKind::Door, partner);
        d.width = std::min(p.openings.min_door_width, wall_length(host->rect, d.side));
        d.height = 2.1;
        d.sill = 0.0;
        d.offset = 0.5 * (wall_length(host->rect, d.side) - d.width);
        d.connects_to = partner->id;
        host->openings.push_back(d);
    }
    return b;
}

Individual init_individual(const DesignProgram& p, Rng& rng, const Weights& w, double grid) {
    return make_individual(init_building(p, rng, grid), p, w);
}

TransformKind propose_action(const ActionStats& stats, Rng& rng) {
    double total = 0.0;
    for (const auto& s : stats.by_kind) total += s.weight;
    double r = uniform01(rng) * total;
    for (std::size_t i = 0; i < kTransformKindCount; ++i) {
        r -= stats.by_kind[i].weight;
        if (r < 0.0) return static_cast<TransformKind>(i);
    }
    for (std::size_t i = kTransformKindCount; i-- > 0;) {
        if (stats.by_kind[i].weight > 0.0) return static_cast<TransformKind>(i);
    }
    return TransformKind::Move;
}

ObjectRef select_target(const std::vector<ObjectDeviation>& ranked, double greediness, Rng& rng) {
    if (ranked.empty()) throw std::invalid_argument("select_target: no objects");
    const bool greedy = uniform01(rng) < greediness;
    if (greedy && ranked.front().deviation > 0.0) return ranked.front().object;
    const auto i = uniform_int(rng, 0, static_cast<std::int64_t>(ranked.size()) - 1);
    return ranked[static_cast<std::size_t>(i)].object;
}

Magnitude transform_magnitude(const Building& b, const DesignProgram& p, TransformKind kind, const ObjectRef& target,
                              const std::vector<ObjectDeviation>& devs, Rng& rng, const Weights& w,
                              const SnapSettings& snap) {
    Magnitude m;
    double own_dev = 0.0;
    for (const auto& d : devs) {
        if (d.object == target) own_dev = d.deviation;
    }
    const Space* s = find_const(b, target.space_id);
    if (!s) return m;

    if (kind == TransformKind::Rotate) {
        m.angle = 90.0;
        return m;
    }
    if (kind == TransformKind::Slice) {
        m.cut_ratio = uniform(rng, 0.3, 0.7);
        return m;
    }
    if (kind == TransformKind::Mirror) return m;

    if (target.is_opening()) {
        if (target.opening_index >= static_cast<int>(s->openings.size())) return m;
        const Opening& o = s->openings[static_cast<std::size_t>(target.opening_index)];
        const double len = wall_length(s->rect, o.side);
        if (kind == TransformKind::Swap) {
            if (s->openings.size() > 1) {
                auto j = uniform_int(rng, 0, static_cast<std::int64_t>(s->openings.size()) - 2);
                if (j >= target.opening_index) ++j;
                m.partner_opening = static_cast<int>(j);
            }
            return m;
        }
        if (kind == TransformKind::Move) {
            // Best wall of the host: the current one if its preferred interval fits, else the longest.
            std::optional<std::pair<double, double>> best_iv;
            Side best_side = o.side;
            for (Side side : {o.side, Side::N, Side::E, Side::S, Side::W}) {
                Opening probe = o;
                probe.side = side;
                auto iv = preferred_interval(b, *s, probe);
                if (!iv) continue;
                if (side == o.side && iv->second - iv->first + kGeomEps >= o.width) {
                    best_iv = iv;
                    best_side = side;
                    break;
                }
                if (!best_iv || iv->second - iv->first > best_iv->second - best_iv->first) {
                    best_iv = iv;
                    best_side = side;
                }
            }
            if (best_iv) {
                const double side_len = wall_length(s->rect, best_side);
                double want = 0.5 * (best_iv->first + best_iv->second) - 0.5 * o.width;
                if (best_side == o.side && uniform01(rng) < 0.5) want = o.offset + (want - o.offset) * uniform(rng, 0.5, 1.5);
                m.wall = best_side;
                m.offset = std::clamp(want, 0.0, std::max(0.0, side_len - o.width));
            } else {
                m.wall = o.side;
                m.offset = std::clamp(o.offset + uniform(rng, -1.0, 1.0), 0.0, std::max(0.0, len - o.width));
            }
            return m;
        }
        if (kind == TransformKind::Stretch) {
            const double min_w = o.kind == OpeningKind::Window ? p.openings.min_window_width : p.openings.min_door_width;
            double delta = std::max(0.0, min_w - o.width);
            const auto* req = p.find_requirement(s->requirement);
            if (o.kind == OpeningKind::Window && req && req->window_required) {
                double glazed = 0.0;
                for (const auto& q : s->openings) {
                    if (q.kind == OpeningKind::Window) glazed += q.width * q.height;
                }
                const double need = p.openings.window_to_floor_ratio_min * s->rect.area() - glazed;
                if (need > 0.0 && o.height > 0.0) delta = std::max(delta, need / o.height);
            }
            if (delta <= 0.0) {
                if (auto iv = preferred_interval(b, *s, o)) delta = std::min(0.0, (iv->second - iv->first) - o.width);
            }
            if (delta == 0.0) delta = uniform(rng, -0.3, 0.3);
            m.shift = std::max(delta * uniform(rng, 0.5, 1.5), std::min(0.0, min_w - o.width));
            return m;
        }
        // WallShift on an opening acts on its host wall.
        m.wall = o.side;
        m.shift = uniform(rng, -0.5, 0.5);
        return m;
    }

    if (kind == TransformKind::Swap) {
        if (own_dev > 0.0 && uniform01(rng) < 0.5) {
            if (auto partner = swap_search(b, p, w, *s, snap)) {
                m.partner = *partner;
                return m;
            }
        }
        std::vector<const Space*> others;
        for (const auto& plan : b.plans) {
            if (plan.storey != s->storey) continue;
            for (const auto& q : plan.spaces) {
                if (q.id != s->id) others.push_back(&q);
            }
        }
        if (!others.empty()) m.partner = others[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(others.size()) - 1))]->id;
        return m;
    }

    const auto attractors = space_attractors(b, p, *s);
    const Attractor* top = nullptr;
    for (const auto& a : attractors) {
        if (!top || a.deviation > top->deviation) top = &a;
    }

    if (kind == TransformKind::Move) {
        if (own_dev > 0.0 && uniform01(rng) < 0.5) {
            if (auto dock = dock_search(b, p, w, *s)) {
                m.translation = *dock;
                return m;
            }
        }
        if (own_dev <= 0.0 || !top) {
            m.translation = random_direction(rng, uniform01(rng));
            return m;
        }
        const double f = uniform(rng, 0.5, 1.5);
        m.translation = settle(b, *s, {top->move.x * f, top->move.y * f});
        return m;
    }

    // Stretch and WallShift
    if (own_dev > 0.0 && uniform01(rng) < 0.5) {
        if (auto st = stretch_search(b, p, w, *s)) {
            m.wall = st->first;
            m.shift = st->second;
            return m;
        }
    }
    const auto [deficit, short_dim] = area_deficit(*s, p);
    if (short_dim > 0.0) {
        m.wall = s->rect.width < s->rect.height ? (uniform01(rng) < 0.5 ? Side::E : Side::W)
                                                : (uniform01(rng) < 0.5 ? Side::N : Side::S);
        m.shift = short_dim * uniform(rng, 0.5, 1.5);
    } else if (deficit != 0.0 && (!top || uniform01(rng) < 0.5)) {
        m.wall = kSides[static_cast<std::size_t>(uniform_int(rng, 0, 3))];
        const double along = wall_length(s->rect, m.wall);
        m.shift = deficit / along * uniform(rng, 0.5, 1.5);
    } else if (top) {
        m.wall = top->wall;
        m.shift = top->wall_shift * uniform(rng, 0.5, 1.5);
        if (m.shift == 0.0) m.shift = uniform(rng, -0.5, 0.5);
    } else {
        m.wall = kSides[static_cast<std::size_t>(uniform_int(rng, 0, 3))];
        m.shift = uniform(rng, -0.5, 0.5);
    }
    return m;
}

namespace {

TransformResult reject(const Building& b, std::string why) { return {b, false, std::move(why)}; }

bool space_valid(const Space& s, const DesignProgram& p) { return dims_ok(s, p) && openings_fit(s); }

// Moves the wall of one space; coordinate snapped onto nearby edges or the grid.
bool stretch_space(const Building& ctx, Space& s, Side wall, double d, const SnapSettings& snap) {
    const Rect old = s.rect;
    const double coord = wall_coordinate(old, wall);
    double target = coord + outward_sign(wall) * d;
    if (snap.grid > 0.0 || snap.snap_distance > 0.0) {
        std::vector<double> cands;
        snap_candidates(ctx, s, wall == Side::E || wall == Side::W, cands);
        target = snap_single(target, cands, snap);
    }
    const double out = (target - coord) * outward_sign(wall);
    if (std::abs(out) < 1e-12) return false;
    stretch_rect(s.rect, wall, out);
    if (s.rect.width <= kGeomEps || s.rect.height <= kGeomEps) return false;
    return refit_openings(s, old);
}

TransformResult apply_to_opening(const Building& b, const DesignProgram& p, TransformKind kind, const ObjectRef& target,
                                 const Magnitude& m, const SnapSettings& snap) {
    Building out = b;
    Located loc = locate(out, target.space_id);
    Space& s = *loc.space;
    if (target.opening_index >= static_cast<int>(s.openings.size())) return reject(b, "opening index out of range");
    Opening& o = s.openings[static_cast<std::size_t>(target.opening_index)];
    const Opening before = o;
    switch (kind) {
        case TransformKind::Move: {
            if (m.offset >= 0.0) {
                o.side = m.wall;
                o.offset = m.offset;
            } else {
                o.offset += m.shift;
            }
            const double len = wall_length(s.rect, o.side);
            o.offset = std::clamp(round_to(o.offset, snap.grid), 0.0, std::max(0.0, len - o.width));
            break;
        }
        case TransformKind::Rotate:
            o.side = rotate_cw(o.side);
            o.offset = std::clamp(o.offset, 0.0, std::max(0.0, wall_length(s.rect, o.side) - o.width));
            break;
        case TransformKind::Mirror:
            o.side = opposite(o.side);
            break;
        case TransformKind::Stretch: {
            const double len = wall_length(s.rect, o.side);
            const double w = round_to(o.width + m.shift, snap.grid);
            if (w <= kGeomEps) return reject(b, "opening width would vanish");
            o.width = std::min(w, len);
            o.offset = std::clamp(o.offset - 0.5 * (o.width - before.width), 0.0, std::max(0.0, len - o.width));
            break;
        }
        case TransformKind::Swap: {
            if (m.partner_opening < 0 || m.partner_opening >= static_cast<int>(s.openings.size()) ||
                m.partner_opening == target.opening_index)
                return reject(b, "no opening to swap with");
            Opening& q = s.openings[static_cast<std::size_t>(m.partner_opening)];
            std::swap(o.side, q.side);
            std::swap(o.offset, q.offset);
            for (Opening* x : {&o, &q}) x->offset = std::clamp(x->offset, 0.0, std::max(0.0, wall_length(s.rect, x->side) - x->width));
            break;
        }
        case TransformKind::WallShift: {
            Magnitude host = m;
            host.wall = before.side;
            return apply_transform(b, p, TransformKind::WallShift, ObjectRef{target.space_id, -1}, host, snap);
        }
        case TransformKind::Slice:
            return reject(b, "slice does not apply to openings");
    }
    if (o == before && kind != TransformKind::Swap) return reject(b, "no change");
    if (!openings_fit(s)) return reject(b, "opening exceeds its wall");
    return {std::move(out), true, {}};
}

TransformResult slice_or_merge(const Building& b, const DesignProgram& p, const ObjectRef& target, const Magnitude& m,
                               const SnapSettings& snap) {
    Building out = b;
    Located loc = locate(out, target.space_id);
    Space& s = *loc.space;
    // Merge back a sibling that completes a rectangle.
    for (std::size_t j = 0; j < loc.plan->spaces.size(); ++j) {
        Space& o = loc.plan->spaces[j];
        if (j == loc.index || o.requirement.empty() || o.requirement != s.requirement) continue;
        const Rect& a = s.rect;
        const Rect& c = o.rect;
        const bool same_rows = std::abs(a.min_y() - c.min_y()) < kGeomEps && std::abs(a.height - c.height) < kGeomEps;
        const bool same_cols = std::abs(a.min_x() - c.min_x()) < kGeomEps && std::abs(a.width - c.width) < kGeomEps;
        const bool touch_x = std::abs(a.max_x() - c.min_x()) < kGeomEps || std::abs(c.max_x() - a.min_x()) < kGeomEps;
        const bool touch_y = std::abs(a.max_y() - c.min_y()) < kGeomEps || std::abs(c.max_y() - a.min_y()) < kGeomEps;
        if (!((same_rows && touch_x) || (same_cols && touch_y))) continue;
        Space& keep = (s.id == s.requirement || o.id != o.requirement) ? s : o;
        Space& gone = (&keep == &s) ? o : s;
        const Rect merged = make_rect(std::min(a.min_x(), c.min_x()), std::min(a.min_y(), c.min_y()),
                                      same_rows ? a.width + c.width : a.width, same_rows ? a.height : a.height + c.height);
        auto remap = [&merged](const Rect& from, Opening op) {
            const Segment w0 = wall_segment(from, op.side);
            const Segment w1 = wall_segment(merged, op.side);
            const bool horizontal = op.side == Side::N || op.side == Side::S;
            op.offset += horizontal ? (w0.a.x - w1.a.x) : (w0.a.y - w1.a.y);
            return op;
        };
        std::vector<Opening> ops;
        for (const auto& op : keep.openings) ops.push_back(remap(keep.rect, op));
        for (const auto& op : gone.openings) ops.push_back(remap(gone.rect, op));
        keep.rect = merged;
        keep.openings = std::move(ops);
        const std::string gone_id = gone.id, keep_id = keep.id;
        const std::size_t gone_index = (&gone == &s) ? loc.index : j;
        loc.plan->spaces.erase(loc.plan->spaces.begin() + static_cast<std::ptrdiff_t>(gone_index));
        retarget_doors(out, gone_id, keep_id);
        Space* kept = out.find_space(keep_id);
        if (!space_valid(*kept, p)) return reject(b, "merged space invalid");
        return {std::move(out), true, {}};
    }

    const bool along_x = s.rect.width >= s.rect.height;
    const double extent = along_x ? s.rect.width : s.rect.height;
    const double origin = along_x ? s.rect.min_x() : s.rect.min_y();
    const double cut = round_to(origin + m.cut_ratio * extent, snap.grid) - origin;
    if (cut <= kGeomEps || cut >= extent - kGeomEps) return reject(b, "cut outside the space");
    Space first = s;
    Space second = s;
    second.id = fresh_id(out, s.requirement.empty() ? s.id : s.requirement);
    first.openings.clear();
    second.openings.clear();
    if (along_x) {
        first.rect.width = cut;
        second.rect.min_corner.x += cut;
        second.rect.width = extent - cut;
    } else {
        first.rect.height = cut;
        second.rect.min_corner.y += cut;
        second.rect.height = extent - cut;
    }
    const Side low = along_x ? Side::W : Side::S;
    const Side high = along_x ? Side::E : Side::N;
    for (Opening op : s.openings) {
        if (op.side == low) {
            first.openings.push_back(op);
        } else if (op.side == high) {
            second.openings.push_back(op);
        } else {
            const double center = op.offset + 0.5 * op.width;
            if (center < cut) {
                op.offset = std::min(op.offset, std::max(0.0, cut - op.width));
                first.openings.push_back(op);
            } else {
                op.offset = std::max(0.0, op.offset - cut);
                op.offset = std::min(op.offset, std::max(0.0, extent - cut - op.width));
                second.openings.push_back(op);
            }
        }
    }
    if (!space_valid(first, p) || !space_valid(second, p)) return reject(b, "slice below minimum dimension");
    *loc.space = std::move(first);
    loc.plan->spaces.insert(loc.plan->spaces.begin() + static_cast<std::ptrdiff_t>(loc.index) + 1, std::move(second));
    return {std::move(out), true, {}};
}

}  // namespace

TransformResult apply_transform(const Building& b, const DesignProgram& p, TransformKind kind, const ObjectRef& target,
                                const Magnitude& m, const SnapSettings& snap) {
    if (!b.find_space(target.space_id)) return reject(b, "unknown target '" + target.space_id + "'");
    if (target.is_opening()) return apply_to_opening(b, p, kind, target, m, snap);

    Building out = b;
    Located loc = locate(out, target.space_id);
    Space& s = *loc.space;
    const Rect old = s.rect;

    switch (kind) {
        case TransformKind::Move: {
            Rect r = s.rect;
            r.min_corner.x += m.translation.x;
            r.min_corner.y += m.translation.y;
            r = snap_position(out, s, r, snap);
            if (r == s.rect) return reject(b, "no change");
            s.rect = r;
            break;
        }
        case TransformKind::Rotate: {
            const Point2 c = s.rect.centroid();
            s.rect = make_rect(c.x - 0.5 * old.height, c.y - 0.5 * old.width, old.height, old.width);
            for (auto& o : s.openings) {
                const double len = wall_length(old, o.side);
                if (o.side == Side::N || o.side == Side::S) o.offset = len - o.offset - o.width;
                o.side = rotate_cw(o.side);
            }
            break;
        }
        case TransformKind::Stretch:
            if (!stretch_space(out, s, m.wall, m.shift, snap)) return reject(b, "stretch has no effect");
            break;
        case TransformKind::Mirror: {
            const Rect bb = out.boundary.bounding_box();
            const double axis = bb.min_x() + 0.5 * bb.width;
            s.rect.min_corner.x = 2.0 * axis - old.max_x();
            for (auto& o : s.openings) {
                if (o.side == Side::N || o.side == Side::S) o.offset = old.width - o.offset - o.width;
                o.side = mirror_ew(o.side);
            }
            break;
        }
        case TransformKind::Slice:
            return slice_or_merge(b, p, target, m, snap);
        case TransformKind::Swap: {
            Located other = locate(out, m.partner);
            if (!other.space || other.space->storey != s.storey || other.space == &s) return reject(b, "no swap partner");
            std::swap(s.rect.min_corner, other.space->rect.min_corner);
            s.rect = snap_position(out, s, s.rect, snap);
            other.space->rect = snap_position(out, *other.space, other.space->rect, snap);
            break;
        }
        case TransformKind::WallShift: {
            const double coord = wall_coordinate(old, m.wall);
            const bool vertical = m.wall == Side::E || m.wall == Side::W;
            double target_coord = coord + outward_sign(m.wall) * m.shift;
            if (snap.grid > 0.0 || snap.snap_distance > 0.0) {
                std::vector<double> cands;
                snap_candidates(out, s, vertical, cands);
                target_coord = snap_single(target_coord, cands, snap);
            }
            const double delta = target_coord - coord;
            if (std::abs(delta) < 1e-12) return reject(b, "wall shift has no effect");
            int touched = 0;
            for (auto& q : loc.plan->spaces) {
                const Rect before = q.rect;
                const double lo = vertical ? q.rect.min_x() : q.rect.min_y();
                const double hi = vertical ? q.rect.max_x() : q.rect.max_y();
                if (std::abs(hi - coord) < kGeomEps) {
                    stretch_rect(q.rect, vertical ? Side::E : Side::N, delta);
                } else if (std::abs(lo - coord) < kGeomEps) {
                    stretch_rect(q.rect, vertical ? Side::W : Side::S, -delta);
                } else {
                    continue;
                }
                ++touched;
                if (q.rect.width <= kGeomEps || q.rect.height <= kGeomEps || !refit_openings(q, before) || !space_valid(q, p))
                    return reject(b, "wall shift violates a space minimum");
            }
            if (touched == 0) return reject(b, "no incident spaces");
            return {std::move(out), true, {}};
        }
    }
    if (!space_valid(s, p)) return reject(b, "transform violates minimum dimension or opening fit");
    return {std::move(out), true, {}};
}

ActionStats initial_stats() { return ActionStats{}; }

ActionStats update_stats(ActionStats stats, TransformKind kind, bool improved, double ema_rate, double weight_floor) {
    ActionStat& s = stats[kind];
    s.success_ema = (1.0 - ema_rate) * s.success_ema + ema_rate * (improved ? 1.0 : 0.0);
    s.weight = std::max(weight_floor, s.success_ema);
    return stats;
}

namespace {

struct Offspring {
    Individual ind;
    std::vector<TransformKind> kinds;
    bool evaluated = false;
};

Offspring make_offspring(const Individual& parent, const std::vector<ObjectDeviation>& parent_ranked,
                         const DesignProgram& p, const GeneratorConfig& cfg, const Weights& w,
                         const ActionStats& stats, Rng rng) {
    Offspring off;
    Building child = parent.building;
    const SnapSettings snap{cfg.grid, cfg.snap_distance};
    const auto k = uniform_int(rng, cfg.transforms_min, cfg.transforms_max);
    // Targets come from the parent's ranking; the child is evaluated once at the end.
    const std::vector<ObjectDeviation>& ranked = parent_ranked;
    if (ranked.empty()) return off;
    for (std::int64_t t = 0; t < k; ++t) {
        const TransformKind kind = propose_action(stats, rng);
        const ObjectRef target = select_target(ranked, cfg.greediness, rng);
        const Magnitude mag = transform_magnitude(child, p, kind, target, ranked, rng, w, snap);
        TransformResult res = apply_transform(child, p, kind, target, mag, snap);
        if (!res.applied) continue;
        child = std::move(res.building);
        if (std::find(off.kinds.begin(), off.kinds.end(), kind) == off.kinds.end()) off.kinds.push_back(kind);
    }
    if (off.kinds.empty()) return off;
    off.ind = make_individual(std::move(child), p, w);
    off.evaluated = true;
    return off;
}

void archive_push(std::vector<Individual>& archive, const Individual& ind) {
    for (const auto& a : archive) {
        if (a.building == ind.building) return;
    }
    archive.push_back(ind);
}

// Overlap, overflow, an adjacency short of a door width, or an area out of range.
bool storey_unsettled(const Building& b, const DesignProgram& p, int k) {
    if (k < 0 || static_cast<std::size_t>(k) >= b.plans.size()) return false;
    const auto& spaces = b.plans[static_cast<std::size_t>(k)].spaces;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (outside_area(spaces[i].rect, b.boundary) > 0.0) return true;
        for (std::size_t j = i + 1; j < spaces.size(); ++j) {
            if (overlap_area(spaces[i].rect, spaces[j].rect) > 0.0) return true;
        }
    }
    for (const auto& r : p.space_reqs) {
        if (r.storey != k) continue;
        const Space* s = primary_instance(b, r.id);
        if (!s) return true;
        const double a = s->rect.area();
        if (a < r.area_min - 1e-9 || a > r.area_max + 1e-9) return true;
    }
    for (const auto& adj : p.adjacency_reqs) {
        const Space* a = primary_instance(b, adj.a);
        const Space* c = primary_instance(b, adj.b);
        if (!a || !c || (a->storey != k && c->storey != k)) continue;
        if (shared_edge_length(a->rect, c->rect) + 1e-9 < p.openings.min_door_width) return true;
    }
    if (k > 0) {
        for (const auto& s : spaces) {
            if (s.function != SpaceFunction::Stair) continue;
            for (const auto& t : b.plans[static_cast<std::size_t>(k - 1)].spaces) {
                if (t.function != SpaceFunction::Stair) continue;
                const Point2 a = s.rect.centroid(), c = t.rect.centroid();
                if (std::hypot(a.x - c.x, a.y - c.y) > 0.5) return true;
            }
        }
    }
    return false;
}

// Requirement ids of storey `from` mapped onto storey `to` when both storeys ask for the same program.
std::optional<std::map<std::string, std::string>> storey_mapping(const DesignProgram& p, int from, int to) {
    std::vector<const SpaceRequirement*> rf, rt;
    for (const auto& r : p.space_reqs) {
        if (r.storey == from) rf.push_back(&r);
        if (r.storey == to) rt.push_back(&r);
    }
    if (rf.size() != rt.size()) return std::nullopt;
    std::map<std::string, std::string> ids;
    for (std::size_t i = 0; i < rf.size(); ++i) {
        SpaceRequirement a = *rf[i];
        a.id = rt[i]->id;
        a.storey = to;
        if (!(a == *rt[i])) return std::nullopt;
        ids[rf[i]->id] = rt[i]->id;
    }
    auto adjacency_set = [&](int k, const std::map<std::string, std::string>* rename) {
        std::vector<AdjacencyRequirement> out;
        for (const auto& adj : p.adjacency_reqs) {
            const SpaceRequirement* ra = p.find_requirement(adj.a);
            const SpaceRequirement* rb = p.find_requirement(adj.b);
            if (!ra || !rb || ra->storey != k || rb->storey != k) continue;
            AdjacencyRequirement e = adj;
            if (rename) {
                e.a = rename->at(adj.a);
                e.b = rename->at(adj.b);
            }
            if (e.b < e.a) std::swap(e.a, e.b);
            out.push_back(e);
        }
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            return std::tie(x.a, x.b, x.kind) < std::tie(y.a, y.b, y.kind);
        });
        return out;
    };
    if (adjacency_set(from, &ids) != adjacency_set(to, nullptr)) return std::nullopt;
    return ids;
}

std::string rename_id(const std::string& id, const std::map<std::string, std::string>& ids) {
    const auto tilde = id.find('~');
    const auto it = ids.find(id.substr(0, tilde));
    if (it == ids.end()) return id;
    return tilde == std::string::npos ? it->second : it->second + id.substr(tilde);
}

// Layout of storey `from` carried over to storey `to`, renamed through `ids`.
FloorPlan copy_storey(const FloorPlan& src, int to, const std::map<std::string, std::string>& ids) {
    FloorPlan out = src;
    out.storey = to;
    for (auto& sp : out.spaces) {
        sp.id = rename_id(sp.id, ids);
        sp.requirement = rename_id(sp.requirement, ids);
        sp.storey = to;
        for (auto& o : sp.openings) {
            if (!o.connects_to.empty()) o.connects_to = rename_id(o.connects_to, ids);
        }
    }
    return out;
}

std::vector<double> storey_scores(const Individual& ind) {
    std::vector<double> out(ind.building.plans.size(), 0.0);
    for (const auto& d : ind.ranked) {
        const Space* s = ind.building.find_space(d.object.space_id);
        if (s && s->storey >= 0 && static_cast<std::size_t>(s->storey) < out.size()) out[static_cast<std::size_t>(s->storey)] += d.deviation;
    }
    return out;
}

}  // namespace

EvolveReport evolve(const DesignProgram& p, const GeneratorConfig& cfg, const Weights& w, const ProgressFn& progress) {
    if (auto issues = validate_program(p); !issues.empty()) throw std::invalid_argument("invalid program: " + issues.front());
    if (auto issues = config_issues(cfg); !issues.empty()) throw std::invalid_argument("invalid generator config: " + issues.front());

    EvolveReport report;
    Rng master(splitmix64(cfg.seed));
    Individual incumbent = init_individual(p, master, w, cfg.grid);
    Individual best = incumbent;
    std::vector<Individual> archive;
    report.evaluations = 1;
    ActionStats stats = initial_stats();
    int stagnant = 0;
    std::uint64_t generation = 0;
    // A storey that stops improving while still infeasible is re-seeded on its own.
    std::vector<double> storey_best = storey_scores(incumbent);
    std::vector<int> storey_stalled(storey_best.size(), 0);

    std::vector<Offspring> offspring(static_cast<std::size_t>(cfg.lambda));
    while (report.evaluations < cfg.max_evaluations && best.objective > 0.0) {
        const auto& ranked = incumbent.ranked;
        const std::int64_t budget = std::min<std::int64_t>(cfg.lambda, cfg.max_evaluations - report.evaluations);
        auto build = [&](std::size_t i) {
            offspring[i] = make_offspring(incumbent, ranked, p, cfg, w, stats,
                                          substream(cfg.seed, generation * static_cast<std::uint64_t>(cfg.lambda) + i));
        };
        if (cfg.workers > 1 && budget > 1) {
            std::vector<std::thread> pool;
            const auto n = static_cast<std::size_t>(budget);
            const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
            for (std::size_t t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t i = t; i < n; i += workers) build(i);
                });
            }
            for (auto& th : pool) th.join();
        } else {
            for (std::size_t i = 0; i < static_cast<std::size_t>(budget); ++i) build(i);
        }

        const Offspring* winner = nullptr;
        for (std::size_t i = 0; i < static_cast<std::size_t>(budget); ++i) {
            const Offspring& o = offspring[i];
            if (!o.evaluated) continue;
            ++report.evaluations;
            const bool improved = o.ind.objective < incumbent.objective;
            for (TransformKind k : o.kinds) stats = update_stats(stats, k, improved, cfg.ema_rate, cfg.weight_floor);
            if (improved && (!winner || o.ind.objective < winner->ind.objective)) winner = &o;
        }
        if (winner) {
            incumbent = winner->ind;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        if (incumbent.objective < best.objective) best = incumbent;
        report.best_history.push_back(best.objective);
        ++generation;
        if (progress) progress(report.evaluations, cfg.max_evaluations);

        if (report.evaluations >= cfg.max_evaluations || best.objective <= 0.0) continue;
        if (storey_best.size() > 1) {
            const auto scores = storey_scores(incumbent);
            const int patience = cfg.stagnation_restart * static_cast<int>(scores.size());
            int reseed = -1;
            for (std::size_t k = 0; k < scores.size(); ++k) {
                if (scores[k] < storey_best[k] - 1e-12) {
                    storey_best[k] = scores[k];
                    storey_stalled[k] = 0;
                } else if (++storey_stalled[k] >= patience && reseed < 0 &&
                           storey_unsettled(incumbent.building, p, static_cast<int>(k))) {
                    reseed = static_cast<int>(k);
                }
            }
            if (reseed >= 0) {
                archive_push(archive, incumbent);
                Building fresh = init_building(p, master, cfg.grid);
                Building b = incumbent.building;
                auto& plan = b.plans[static_cast<std::size_t>(reseed)];
                int donor = -1;
                std::map<std::string, std::string> donor_ids;
                for (int d = 1; d < static_cast<int>(b.plans.size()) && donor < 0; ++d) {
                    for (int j : {reseed - d, reseed + d}) {
                        if (j < 0 || j >= static_cast<int>(b.plans.size()) || donor >= 0) continue;
                        if (storey_unsettled(b, p, j)) continue;
                        if (auto ids = storey_mapping(p, j, reseed)) {
                            donor = j;
                            donor_ids = std::move(*ids);
                        }
                    }
                }
                if (donor >= 0) {
                    plan = copy_storey(b.plans[static_cast<std::size_t>(donor)], reseed, donor_ids);
                } else {
                    std::vector<Space> stairs;
                    for (const auto& sp : plan.spaces) {
                        if (sp.function == SpaceFunction::Stair) stairs.push_back(sp);
                    }
                    plan = fresh.plans[static_cast<std::size_t>(reseed)];
                    for (auto& sp : plan.spaces) {
                        for (const auto& st : stairs) {
                            if (st.id == sp.id) sp = st;
                        }
                    }
                }
                incumbent = make_individual(std::move(b), p, w);
                ++report.evaluations;
                ++report.restarts;
                stagnant = 0;
                storey_best = storey_scores(incumbent);
                std::fill(storey_stalled.begin(), storey_stalled.end(), 0);
                if (incumbent.objective < best.objective) best = incumbent;
                continue;
            }
        }
        bool any_unsettled = false;
        for (std::size_t k = 0; storey_best.size() > 1 && k < storey_best.size() && !any_unsettled; ++k) {
            any_unsettled = storey_unsettled(incumbent.building, p, static_cast<int>(k));
        }
        if (stagnant >= cfg.stagnation_restart && !any_unsettled) {
            archive_push(archive, incumbent);
            incumbent = init_individual(p, master, w, cfg.grid);
            ++report.evaluations;
            ++report.restarts;
            stagnant = 0;
            storey_best = storey_scores(incumbent);
            std::fill(storey_stalled.begin(), storey_stalled.end(), 0);
            if (incumbent.objective < best.objective) best = incumbent;
        }
    }
    archive_push(archive, incumbent);
    archive_push(archive, best);
    std::stable_sort(archive.begin(), archive.end(),
                     [](const Individual& a, const Individual& b) { return a.objective < b.objective; });
    report.solutions = std::move(archive);
    report.final_stats = stats;
    return report;
}

}  // namespace planforge
