#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/model.hpp"

namespace planforge {

struct DxfPair {
    int code = 0;
    std::string value;

    friend bool operator==(const DxfPair&, const DxfPair&) = default;
};

struct DxfDocument {
    std::vector<DxfPair> pairs;

    std::string to_text() const;
};

struct DxfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DxfView : unsigned char { Plan2d, Wire3d };

struct DxfMode {
    DxfView view = DxfView::Plan2d;
    int storey = 0;  // plan2d only

    static DxfMode plan2d(int storey) { return {DxfView::Plan2d, storey}; }
    static DxfMode wire3d() { return {DxfView::Wire3d, 0}; }
};

inline constexpr const char* kBoundaryLayer = "BOUNDARY";
inline constexpr const char* kSpacesLayer = "SPACES";
inline constexpr const char* kOpeningsLayer = "OPENINGS";

DxfDocument dxf_document(const Building& b, const DxfMode& mode);
std::string to_dxf(const Building& b, const DxfMode& mode);

// Splits text into group-code pairs; throws DxfError naming the offending line.
DxfDocument parse_dxf(std::string_view text);

// Structural problems of a document (section layout, terminator); empty when well-formed.
std::vector<std::string> dxf_issues(const DxfDocument& d);

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

struct DxfPolyline {
    std::string layer;
    std::vector<Point2> points;
    bool closed = false;
};

struct DxfLine {
    std::string layer;
    Point3 a;
    Point3 b;
};

struct DxfGeometry {
    std::vector<DxfPolyline> polylines;
    std::vector<DxfLine> lines;
};

// LWPOLYLINE and LINE entities of the ENTITIES section; everything else is skipped.
DxfGeometry read_dxf_geometry(const DxfDocument& d);

}  // namespace planforge
