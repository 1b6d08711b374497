#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "planforge/geometry.hpp"

namespace planforge {

enum class OpeningKind : unsigned char { Door, Window };

struct Opening {
    OpeningKind kind = OpeningKind::Window;
    Side side = Side::S;
    double offset = 0.0;  // along the host wall, from its west/south end
    double width = 1.0;
    double height = 1.2;
    double sill = 0.9;
    double overhang_depth = 0.0;
    double fin_depth_left = 0.0;
    double fin_depth_right = 0.0;
    std::string connects_to;  // doors only: id of the space on the other side

    friend bool operator==(const Opening&, const Opening&) = default;
};

enum class SpaceFunction : unsigned char { Bedroom, Living, Kitchen, Bathroom, Hall, Corridor, Stair, Other };

std::string_view function_name(SpaceFunction f);
SpaceFunction function_from_name(std::string_view name);  // throws std::invalid_argument
bool is_circulation(SpaceFunction f);

enum class ElementKind : unsigned char { ExteriorWall, InteriorWall, Ceiling, Pavement, Window, Door };
inline constexpr std::size_t kElementKindCount = 6;

std::string_view element_name(ElementKind k);
ElementKind element_from_name(std::string_view name);  // throws std::invalid_argument

struct Layer {
    double thickness = 0.1;      // m
    double conductivity = 1.0;   // W/(m K)
    double density = 1000.0;     // kg/m3
    double specific_heat = 1000.0;  // J/(kg K)

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct Glazing {
    double u_value = 2.8;  // W/(m2 K)
    double shgc = 0.6;

    friend bool operator==(const Glazing&, const Glazing&) = default;
};

// Opaque assemblies carry layers; glazing assemblies carry a Glazing record.
struct Assembly {
    std::vector<Layer> layers;
    std::optional<Glazing> glazing;

    bool is_glazing() const { return glazing.has_value(); }
    double heat_capacity_per_area() const;  // J/(m2 K)

    friend bool operator==(const Assembly&, const Assembly&) = default;
};

std::vector<std::string> assembly_issues(const Assembly& a);

struct ConstructionSet {
    std::array<Assembly, kElementKindCount> by_kind;

    const Assembly& operator[](ElementKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
    Assembly& operator[](ElementKind k) { return by_kind[static_cast<std::size_t>(k)]; }

    friend bool operator==(const ConstructionSet&, const ConstructionSet&) = default;
};

ConstructionSet default_constructions();

struct Space {
    std::string id;
    std::string requirement;  // id of the SpaceRequirement this space instantiates
    SpaceFunction function = SpaceFunction::Other;
    std::string function_tag;  // free label for SpaceFunction::Other
    int storey = 0;
    Rect rect;
    std::vector<Opening> openings;
    std::map<ElementKind, Assembly> construction_overrides;

    bool circulation() const { return is_circulation(function); }
    const Assembly& assembly(ElementKind k, const ConstructionSet& defaults) const;

    friend bool operator==(const Space&, const Space&) = default;
};

struct FloorPlan {
    int storey = 0;
    std::vector<Space> spaces;

    friend bool operator==(const FloorPlan&, const FloorPlan&) = default;
};

struct Location {
    double latitude = 40.2;
    double longitude = -8.4;
    double timezone = 0.0;
    double elevation = 100.0;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Building {
    Boundary boundary;
    int storey_count = 1;
    double storey_height = 3.0;
    std::vector<FloorPlan> plans;
    double orientation = 0.0;  // degrees clockwise from true north
    std::vector<int> party_edges;
    ConstructionSet constructions = default_constructions();
    Location location;

    const Space* find_space(std::string_view id) const;
    Space* find_space(std::string_view id);
    std::size_t space_count() const;

    friend bool operator==(const Building&, const Building&) = default;
};

// Structural problems (duplicate ids, invalid opening placement, ...); empty when valid.
std::vector<std::string> building_issues(const Building& b);

// Wall-local interval occupied by an opening, clamped to nothing.
inline double opening_end(const Opening& o) { return o.offset + o.width; }
Point2 opening_center(const Rect& host, const Opening& o);

}  // namespace planforge
