#pragma once

#include <span>
#include <string>
#include <vector>

namespace planforge {

// Coordinates closer than this are treated as coincident.
inline constexpr double kGeomEps = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// Axis-aligned rectangle anchored at its lower-left corner.
struct Rect {
    Point2 min_corner;
    double width = 1.0;
    double height = 1.0;

    double min_x() const { return min_corner.x; }
    double min_y() const { return min_corner.y; }
    double max_x() const { return min_corner.x + width; }
    double max_y() const { return min_corner.y + height; }
    double area() const { return width * height; }
    double perimeter() const { return 2.0 * (width + height); }
    Point2 centroid() const { return {min_corner.x + 0.5 * width, min_corner.y + 0.5 * height}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect make_rect(double x, double y, double w, double h) { return Rect{{x, y}, w, h}; }

// Wall sides of a rectangle in the plan-local frame (+y is plan north).
enum class Side : unsigned char { N = 0, E = 1, S = 2, W = 3 };

std::string_view side_name(Side s);
Side side_from_name(std::string_view name);  // throws std::invalid_argument
Side rotate_cw(Side s);
Side opposite(Side s);
Side mirror_ew(Side s);

struct Segment {
    Point2 a;
    Point2 b;
    double length() const;
};

// Rectilinear simple polygon, counter-clockwise, closed implicitly.
struct Boundary {
    std::vector<Point2> vertices;

    std::size_t edge_count() const { return vertices.size(); }
    Segment edge(std::size_t i) const { return {vertices[i], vertices[(i + 1) % vertices.size()]}; }
    double area() const;
    Rect bounding_box() const;
    Point2 centroid() const;
    bool contains(Point2 p) const;  // interior or on an edge

    friend bool operator==(const Boundary&, const Boundary&) = default;
};

Boundary rectangle_boundary(double x0, double y0, double x1, double y1);

// Empty when the polygon is a valid counter-clockwise rectilinear simple polygon.
std::vector<std::string> boundary_issues(const Boundary& b);

double signed_polygon_area(std::span<const Point2> pts);

double overlap_area(const Rect& a, const Rect& b);
double overlap_length(double a0, double a1, double b0, double b1);

// Length of wall contact between rectangles with disjoint interiors.
double shared_edge_length(const Rect& a, const Rect& b);

// Euclidean gap between two rectangles; 0 when they touch or overlap.
double rect_distance(const Rect& a, const Rect& b);
double point_rect_distance(Point2 p, const Rect& r);
double point_segment_distance(Point2 p, const Segment& s);

double inside_area(const Rect& r, const Boundary& b);
double outside_area(const Rect& r, const Boundary& b);

// Area of the union of rects, and of that union clipped to the boundary.
double union_area(std::span<const Rect> rects);
double covered_area(std::span<const Rect> rects, const Boundary& b);

double compactness(const Rect& r);

// Absolute outward azimuth of a wall, degrees clockwise from north.
double wall_azimuth(Side side, double building_orientation);

// Smallest absolute difference between two azimuths, in [0, 180].
double angular_distance(double a, double b);

// Wall segment of a rect side; N/S run west->east, E/W run south->north.
Segment wall_segment(const Rect& r, Side s);
double wall_length(const Rect& r, Side s);

// Length of the wall interval [from, to] (wall-local offsets) that lies on
// boundary edges not listed in excluded_edges.
double boundary_contact_length(const Rect& r, Side s, double from, double to, const Boundary& b,
                               std::span<const int> excluded_edges);

}  // namespace planforge
