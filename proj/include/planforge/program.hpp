#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planforge/model.hpp"

namespace planforge {

// Compass sector: azimuths within half_width degrees of center.
struct Sector {
    double center = 180.0;
    double half_width = 45.0;

    friend bool operator==(const Sector&, const Sector&) = default;
};

// Normalized deviation of an azimuth from a sector: 0 inside, degrees/90 outside, capped at 1.
double sector_deviation(double azimuth, const Sector& s);

struct SpaceRequirement {
    std::string id;
    SpaceFunction function = SpaceFunction::Other;
    std::string function_tag;
    int storey = 0;
    double area_min = 9.0;
    double area_max = 16.0;
    double min_dimension = 2.5;
    std::optional<Sector> orientation_pref;
    std::optional<Sector> window_orientation_pref;
    std::optional<Point2> position_pref;
    bool window_required = false;

    friend bool operator==(const SpaceRequirement&, const SpaceRequirement&) = default;
};

enum class AdjacencyKind : unsigned char { DoorConnected, Adjacent };

struct AdjacencyRequirement {
    std::string a;
    std::string b;
    AdjacencyKind kind = AdjacencyKind::DoorConnected;

    friend bool operator==(const AdjacencyRequirement&, const AdjacencyRequirement&) = default;
};

struct OpeningRules {
    double min_door_width = 0.9;
    double min_window_width = 1.0;
    double window_to_floor_ratio_min = 0.1;

    friend bool operator==(const OpeningRules&, const OpeningRules&) = default;
};

// Site data the generated buildings inherit.
struct Site {
    Location location;
    double orientation = 0.0;
    ConstructionSet constructions = default_constructions();

    friend bool operator==(const Site&, const Site&) = default;
};

struct DesignProgram {
    Boundary boundary;
    int storey_count = 1;
    double storey_height = 3.0;
    double gross_area_limit = 100.0;         // per storey, m2
    double construction_area_limit = 120.0;  // per storey, m2
    std::vector<SpaceRequirement> space_reqs;
    std::vector<AdjacencyRequirement> adjacency_reqs;
    std::vector<int> neighbor_sides;  // boundary edges shared with neighboring buildings
    OpeningRules openings;
    Site site;

    const SpaceRequirement* find_requirement(std::string_view id) const;

    friend bool operator==(const DesignProgram&, const DesignProgram&) = default;
};

std::vector<std::string> validate_program(const DesignProgram& p);

}  // namespace planforge
