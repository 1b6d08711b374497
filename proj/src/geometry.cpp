#include "planforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace planforge {

std::string_view side_name(Side s) {
    switch (s) {
        case Side::N: return "N";
        case Side::E: return "E";
        case Side::S: return "S";
        case Side::W: return "W";
    }
    return "?";
}

Side side_from_name(std::string_view name) {
    if (name == "N") return Side::N;
    if (name == "E") return Side::E;
    if (name == "S") return Side::S;
    if (name == "W") return Side::W;
    throw std::invalid_argument("unknown side '" + std::string(name) + "'");
}

Side rotate_cw(Side s) { return static_cast<Side>((static_cast<int>(s) + 1) % 4); }
Side opposite(Side s) { return static_cast<Side>((static_cast<int>(s) + 2) % 4); }
Side mirror_ew(Side s) {
    if (s == Side::E) return Side::W;
    if (s == Side::W) return Side::E;
    return s;
}

double Segment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

double signed_polygon_area(std::span<const Point2> pts) {
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& q = pts[(i + 1) % pts.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

double Boundary::area() const { return std::abs(signed_polygon_area(vertices)); }

Rect Boundary::bounding_box() const {
    if (vertices.empty()) return {};
    double x0 = vertices[0].x, x1 = x0, y0 = vertices[0].y, y1 = y0;
    for (const auto& v : vertices) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    return make_rect(x0, y0, x1 - x0, y1 - y0);
}

Point2 Boundary::centroid() const {
    const double a = signed_polygon_area(vertices);
    if (std::abs(a) < kGeomEps) return bounding_box().centroid();
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % vertices.size()];
        const double cross = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

bool Boundary::contains(Point2 p) const {
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, edge(i)) < kGeomEps) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = vertices[i];
        const auto& b = vertices[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

Boundary rectangle_boundary(double x0, double y0, double x1, double y1) {
    return Boundary{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

namespace {

bool is_axis_aligned(const Segment& s) {
    return std::abs(s.a.x - s.b.x) < kGeomEps || std::abs(s.a.y - s.b.y) < kGeomEps;
}

// Closed-segment intersection test for axis-aligned segments.
bool segments_touch(const Segment& s, const Segment& t) {
    const double sx0 = std::min(s.a.x, s.b.x), sx1 = std::max(s.a.x, s.b.x);
    const double sy0 = std::min(s.a.y, s.b.y), sy1 = std::max(s.a.y, s.b.y);
    const double tx0 = std::min(t.a.x, t.b.x), tx1 = std::max(t.a.x, t.b.x);
    const double ty0 = std::min(t.a.y, t.b.y), ty1 = std::max(t.a.y, t.b.y);
    return sx0 <= tx1 + kGeomEps && tx0 <= sx1 + kGeomEps && sy0 <= ty1 + kGeomEps &&
           ty0 <= sy1 + kGeomEps;
}

}  // namespace

std::vector<std::string> boundary_issues(const Boundary& b) {
    std::vector<std::string> issues;
    const std::size_t n = b.vertices.size();
    if (n < 4) {
        issues.emplace_back("boundary needs at least 4 vertices");
        return issues;
    }
    for (const auto& v : b.vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            issues.emplace_back("boundary vertex is not finite");
            return issues;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Segment e = b.edge(i);
        if (e.length() < kGeomEps) issues.push_back("boundary edge " + std::to_string(i) + " has zero length");
        else if (!is_axis_aligned(e)) issues.push_back("boundary edge " + std::to_string(i) + " is not axis-aligned");
    }
    if (!issues.empty()) return issues;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_touch(b.edge(i), b.edge(j))) {
                issues.push_back("boundary edges " + std::to_string(i) + " and " + std::to_string(j) +
                                 " intersect");
                return issues;
            }
        }
    }
    if (signed_polygon_area(b.vertices) <= 0.0) issues.emplace_back("boundary must be counter-clockwise");
    return issues;
}

double overlap_length(double a0, double a1, double b0, double b1) {
    const double len = std::min(a1, b1) - std::max(a0, b0);
    return len > kGeomEps ? len : 0.0;
}

double overlap_area(const Rect& a, const Rect& b) {
    return overlap_length(a.min_x(), a.max_x(), b.min_x(), b.max_x()) *
           overlap_length(a.min_y(), a.max_y(), b.min_y(), b.max_y());
}

double shared_edge_length(const Rect& a, const Rect& b) {
    if (overlap_area(a, b) > 0.0) return 0.0;
    double contact = 0.0;
    if (std::abs(a.max_x() - b.min_x()) < kGeomEps || std::abs(b.max_x() - a.min_x()) < kGeomEps) {
        contact = std::max(contact, overlap_length(a.min_y(), a.max_y(), b.min_y(), b.max_y()));
    }
    if (std::abs(a.max_y() - b.min_y()) < kGeomEps || std::abs(b.max_y() - a.min_y()) < kGeomEps) {
        contact = std::max(contact, overlap_length(a.min_x(), a.max_x(), b.min_x(), b.max_x()));
    }
    return contact;
}

double rect_distance(const Rect& a, const Rect& b) {
    const double dx = std::max({0.0, b.min_x() - a.max_x(), a.min_x() - b.max_x()});
    const double dy = std::max({0.0, b.min_y() - a.max_y(), a.min_y() - b.max_y()});
    const double d = std::hypot(dx, dy);
    return d > kGeomEps ? d : 0.0;
}

double point_rect_distance(Point2 p, const Rect& r) {
    const double dx = std::max({0.0, r.min_x() - p.x, p.x - r.max_x()});
    const double dy = std::max({0.0, r.min_y() - p.y, p.y - r.max_y()});
    return std::hypot(dx, dy);
}

double point_segment_distance(Point2 p, const Segment& s) {
    const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (s.a.x + t * vx), p.y - (s.a.y + t * vy));
}

double inside_area(const Rect& r, const Boundary& b) {
    // Sutherland-Hodgman: clip the (possibly concave) boundary by the convex rect.
    std::vector<Point2> poly = b.vertices;
    const double x0 = r.min_x(), x1 = r.max_x(), y0 = r.min_y(), y1 = r.max_y();
    auto clip = [&poly](auto inside, auto intersect) {
        std::vector<Point2> out;
        out.reserve(poly.size() + 4);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2 cur = poly[i];
            const Point2 prev = poly[(i + poly.size() - 1) % poly.size()];
            const bool ci = inside(cur), pi = inside(prev);
            if (ci) {
                if (!pi) out.push_back(intersect(prev, cur));
                out.push_back(cur);
            } else if (pi) {
                out.push_back(intersect(prev, cur));
            }
        }
        poly = std::move(out);
    };
    auto at_x = [](double x) {
        return [x](Point2 p, Point2 q) { return Point2{x, p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)}; };
    };
    auto at_y = [](double y) {
        return [y](Point2 p, Point2 q) { return Point2{p.x + (q.x - p.x) * (y - p.y) / (q.y - p.y), y}; };
    };
    clip([x0](Point2 p) { return p.x >= x0; }, at_x(x0));
    if (poly.empty()) return 0.0;
    clip([x1](Point2 p) { return p.x <= x1; }, at_x(x1));
    if (poly.empty()) return 0.0;
    clip([y0](Point2 p) { return p.y >= y0; }, at_y(y0));
    if (poly.empty()) return 0.0;
    clip([y1](Point2 p) { return p.y <= y1; }, at_y(y1));
    if (poly.size() < 3) return 0.0;
    return std::min(r.area(), std::abs(signed_polygon_area(poly)));
}

double outside_area(const Rect& r, const Boundary& b) {
    const double out = r.area() - inside_area(r, b);
    return out > kGeomEps ? out : 0.0;
}

namespace {

using Interval = std::pair<double, double>;

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || x - out.back() > kGeomEps) out.push_back(x);
    }
    return out;
}

// Merged x-intervals of the rects whose interior spans the horizontal line y.
std::vector<Interval> rect_cover_at(std::span<const Rect> rects, double y) {
    std::vector<Interval> iv;
    for (const auto& r : rects) {
        if (y > r.min_y() && y < r.max_y()) iv.emplace_back(r.min_x(), r.max_x());
    }
    std::sort(iv.begin(), iv.end());
    std::vector<Interval> merged;
    for (const auto& i : iv) {
        if (!merged.empty() && i.first <= merged.back().second) merged.back().second = std::max(merged.back().second, i.second);
        else merged.push_back(i);
    }
    return merged;
}

// Interior x-intervals of a simple rectilinear polygon along the line y (y not at a vertex).
std::vector<Interval> polygon_cover_at(const Boundary& b, double y) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < b.edge_count(); ++i) {
        const Segment e = b.edge(i);
        if (std::abs(e.a.x - e.b.x) > kGeomEps) continue;
        if ((e.a.y > y) != (e.b.y > y)) xs.push_back(e.a.x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<Interval> iv;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) iv.emplace_back(xs[i], xs[i + 1]);
    return iv;
}

double intervals_length(const std::vector<Interval>& iv) {
    double t = 0.0;
    for (const auto& i : iv) t += i.second - i.first;
    return t;
}

double intersection_length(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    double t = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (hi > lo) t += hi - lo;
        if (a[i].second < b[j].second) ++i;
        else ++j;
    }
    return t;
}

}  // namespace

double union_area(std::span<const Rect> rects) {
    std::vector<double> ys;
    for (const auto& r : rects) ys.insert(ys.end(), {r.min_y(), r.max_y()});
    ys = sorted_unique(std::move(ys));
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        total += (ys[j + 1] - ys[j]) * intervals_length(rect_cover_at(rects, 0.5 * (ys[j] + ys[j + 1])));
    }
    return total;
}

double covered_area(std::span<const Rect> rects, const Boundary& b) {
    std::vector<double> ys;
    for (const auto& r : rects) ys.insert(ys.end(), {r.min_y(), r.max_y()});
    for (const auto& v : b.vertices) ys.push_back(v.y);
    ys = sorted_unique(std::move(ys));
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        const double y = 0.5 * (ys[j] + ys[j + 1]);
        const auto cover = rect_cover_at(rects, y);
        if (cover.empty()) continue;
        total += (ys[j + 1] - ys[j]) * intersection_length(cover, polygon_cover_at(b, y));
    }
    return total;
}

double compactness(const Rect& r) {
    const double p = r.perimeter();
    return 16.0 * r.area() / (p * p);
}

double wall_azimuth(Side side, double building_orientation) {
    const double base = 90.0 * static_cast<int>(side);
    double az = std::fmod(base + building_orientation, 360.0);
    if (az < 0.0) az += 360.0;
    return az;
}

double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

Segment wall_segment(const Rect& r, Side s) {
    switch (s) {
        case Side::N: return {{r.min_x(), r.max_y()}, {r.max_x(), r.max_y()}};
        case Side::S: return {{r.min_x(), r.min_y()}, {r.max_x(), r.min_y()}};
        case Side::E: return {{r.max_x(), r.min_y()}, {r.max_x(), r.max_y()}};
        case Side::W: return {{r.min_x(), r.min_y()}, {r.min_x(), r.max_y()}};
    }
    return {};
}

double wall_length(const Rect& r, Side s) { return (s == Side::N || s == Side::S) ? r.width : r.height; }

double boundary_contact_length(const Rect& r, Side s, double from, double to, const Boundary& b,
                               std::span<const int> excluded_edges) {
    const bool horizontal = (s == Side::N || s == Side::S);
    const Segment w = wall_segment(r, s);
    const double line = horizontal ? w.a.y : w.a.x;
    const double start = (horizontal ? w.a.x : w.a.y) + from;
    const double end = (horizontal ? w.a.x : w.a.y) + to;
    double total = 0.0;
    for (std::size_t i = 0; i < b.edge_count(); ++i) {
        if (std::find(excluded_edges.begin(), excluded_edges.end(), static_cast<int>(i)) != excluded_edges.end())
            continue;
        const Segment e = b.edge(i);
        if (horizontal) {
            if (std::abs(e.a.y - e.b.y) > kGeomEps || std::abs(e.a.y - line) > kGeomEps) continue;
            total += overlap_length(start, end, std::min(e.a.x, e.b.x), std::max(e.a.x, e.b.x));
        } else {
            if (std::abs(e.a.x - e.b.x) > kGeomEps || std::abs(e.a.x - line) > kGeomEps) continue;
            total += overlap_length(start, end, std::min(e.a.y, e.b.y), std::max(e.a.y, e.b.y));
        }
    }
    return total;
}

}  // namespace planforge
