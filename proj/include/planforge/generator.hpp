#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planforge/indicators.hpp"
#include "planforge/program.hpp"
#include "planforge/random.hpp"

namespace planforge {

enum class TransformKind : unsigned char { Move, Rotate, Stretch, Mirror, Slice, Swap, WallShift };
inline constexpr std::size_t kTransformKindCount = 7;

std::string_view transform_name(TransformKind k);

struct ActionStat {
    double weight = 0.5;
    double success_ema = 0.5;
};

struct ActionStats {
    std::array<ActionStat, kTransformKindCount> by_kind{};

    ActionStat& operator[](TransformKind k) { return by_kind[static_cast<std::size_t>(k)]; }
    const ActionStat& operator[](TransformKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
};

struct GeneratorConfig {
    int lambda = 8;
    std::int64_t max_evaluations = 200'000;
    int transforms_min = 1;
    int transforms_max = 3;
    double greediness = 0.8;
    double ema_rate = 0.1;
    double weight_floor = 0.05;
    int stagnation_restart = 500;
    std::uint64_t seed = 1;
    // Coordinates land on this grid unless an edge within snap_distance attracts them.
    double grid = 0.05;
    double snap_distance = 0.3;
    int workers = 1;

    friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

std::vector<std::string> config_issues(const GeneratorConfig& c);

struct Individual {
    Building building;
    PerformanceVector perf;
    double objective = 0.0;
    std::vector<ObjectDeviation> ranked;  // weighted per-object deviations, ranked
};

Individual make_individual(Building b, const DesignProgram& p, const Weights& w);

// Deviation-directed transformation parameters.
struct Magnitude {
    Point2 translation;         // Move (space)
    Side wall = Side::N;        // Stretch / WallShift
    double shift = 0.0;         // Stretch / WallShift, or opening offset/width delta
    double cut_ratio = 0.5;     // Slice
    double angle = 0.0;         // Rotate
    std::string partner;        // Swap
    int partner_opening = -1;   // Swap between openings of one space
    double offset = -1.0;       // opening Move: target offset on `wall` when >= 0, else shift along the wall
};

struct TransformResult {
    Building building;
    bool applied = false;
    std::string rejection;
};

Building init_building(const DesignProgram& p, Rng& rng, double grid = 0.05);
Individual init_individual(const DesignProgram& p, Rng& rng, const Weights& w, double grid = 0.05);

TransformKind propose_action(const ActionStats& stats, Rng& rng);

// Requires a non-empty list ranked by nonconformity_ranking.
ObjectRef select_target(const std::vector<ObjectDeviation>& ranked, double greediness, Rng& rng);

struct SnapSettings {
    double grid = 0.0;           // 0 disables grid rounding
    double snap_distance = 0.0;  // 0 disables edge attraction
};

Magnitude transform_magnitude(const Building& b, const DesignProgram& p, TransformKind kind, const ObjectRef& target,
                              const std::vector<ObjectDeviation>& devs, Rng& rng, const Weights& w = Weights::defaults(),
                              const SnapSettings& snap = {0.05, 0.3});

TransformResult apply_transform(const Building& b, const DesignProgram& p, TransformKind kind, const ObjectRef& target,
                                const Magnitude& m, const SnapSettings& snap = {});

ActionStats initial_stats();
ActionStats update_stats(ActionStats stats, TransformKind kind, bool improved, double ema_rate, double weight_floor);

struct EvolveReport {
    std::vector<Individual> solutions;  // best first, deduplicated
    std::vector<double> best_history;   // best objective after each generation
    std::int64_t evaluations = 0;
    int restarts = 0;
    ActionStats final_stats;
};

using ProgressFn = std::function<void(std::int64_t evaluations, std::int64_t max_evaluations)>;

// Throws std::invalid_argument when the program or config does not validate.
EvolveReport evolve(const DesignProgram& p, const GeneratorConfig& cfg, const Weights& w, const ProgressFn& progress = {});

}  // namespace planforge
