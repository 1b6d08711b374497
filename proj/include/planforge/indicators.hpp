#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/model.hpp"
#include "planforge/program.hpp"

namespace planforge {

// The fifteen layout penalties, grouped floor plan / space / openings.
enum class Indicator : unsigned char {
    AreasLimits,
    Circulation,
    AreasMaximization,
    BoundaryUsage,
    ConnectivityAdjacency,
    SpaceOverlap,
    SpaceOrientation,
    Overflow,
    Compactness,
    AreaDims,
    SpacePosition,
    OpeningPosition,
    OpeningOrientation,
    OpeningOverlap,
    WidthAndWfr,
};

inline constexpr std::size_t kIndicatorCount = 15;

std::string_view indicator_name(Indicator i);
std::optional<Indicator> indicator_from_name(std::string_view name);
const std::array<Indicator, kIndicatorCount>& all_indicators();

struct PerformanceVector {
    std::array<double, kIndicatorCount> values{};

    double operator[](Indicator i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](Indicator i) { return values[static_cast<std::size_t>(i)]; }

    friend bool operator==(const PerformanceVector&, const PerformanceVector&) = default;
};

struct Weights {
    std::array<double, kIndicatorCount> values{};

    double operator[](Indicator i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](Indicator i) { return values[static_cast<std::size_t>(i)]; }

    // 1.0 everywhere, 10.0 on space overlap and overflow.
    static Weights defaults();
    static Weights uniform(double w);

    friend bool operator==(const Weights&, const Weights&) = default;
};

// A space (opening_index < 0) or one opening of a space.
struct ObjectRef {
    std::string space_id;
    int opening_index = -1;

    bool is_opening() const { return opening_index >= 0; }
    std::string to_string() const;

    friend auto operator<=>(const ObjectRef&, const ObjectRef&) = default;
};

struct ObjectDeviation {
    ObjectRef object;
    double deviation = 0.0;
};

inline constexpr double kMissingSpaceBase = 100.0;

struct FloorplanPenalties {
    double areas_limits = 0.0;
    double circulation = 0.0;
    double areas_maximization = 0.0;
    double boundary_usage = 0.0;
};

struct SpacePenalties {
    double connectivity_adjacency = 0.0;
    double overlap = 0.0;
    double orientation = 0.0;
    double overflow = 0.0;
    double compactness = 0.0;
    double area_dims = 0.0;
    double absolute_position = 0.0;
    std::vector<ObjectDeviation> per_space;
};

struct OpeningPenalties {
    double absolute_position = 0.0;
    double orientation = 0.0;
    double overlap = 0.0;
    double width_and_wfr = 0.0;
    std::vector<ObjectDeviation> per_opening;
};

FloorplanPenalties eval_floorplan_penalties(const Building& b, const DesignProgram& p);
// Per-object deviations are the weighted contributions of each object.
SpacePenalties eval_space_penalties(const Building& b, const DesignProgram& p, const Weights& w = Weights::uniform(1.0));
OpeningPenalties eval_opening_penalties(const Building& b, const DesignProgram& p, const Weights& w = Weights::uniform(1.0));

struct Evaluation {
    PerformanceVector perf;
    std::vector<ObjectDeviation> deviations;  // every space and opening, unranked
};

Evaluation evaluate_detailed(const Building& b, const DesignProgram& p, const Weights& w = Weights::uniform(1.0));
PerformanceVector evaluate(const Building& b, const DesignProgram& p);

double aggregate(const PerformanceVector& v, const Weights& w);

// Descending deviation, ties by object reference.
std::vector<ObjectDeviation> nonconformity_ranking(std::vector<ObjectDeviation> devs);

// Space instantiating a requirement: the one whose id equals the requirement id,
// otherwise the first space carrying that requirement.
const Space* primary_instance(const Building& b, std::string_view requirement_id);

// Sum of the space.overlap and space.overflow penalties.
double feasibility_penalty(const PerformanceVector& v);

}  // namespace planforge
