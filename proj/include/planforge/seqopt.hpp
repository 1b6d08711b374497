#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planforge/comfort.hpp"
#include "planforge/model.hpp"
#include "planforge/program.hpp"
#include "planforge/thermal.hpp"
#include "planforge/weather.hpp"

namespace planforge {

enum class VariableKind : unsigned char {
    BuildingOrientation,
    OpeningPosition,
    OpeningWidth,
    OpeningSide,
    WallPosition,
    ReflectPlan,
    OverhangDepth,
    FinDepth,
};
inline constexpr std::size_t kVariableKindCount = 8;

std::string_view variable_kind_name(VariableKind k);
std::optional<VariableKind> variable_kind_from_name(std::string_view name);
const std::vector<VariableKind>& default_variable_order();

enum class WallAxis : unsigned char { X, Y };  // X: a wall at x = coordinate (runs north-south)

struct DesignVariable {
    VariableKind kind = VariableKind::BuildingOrientation;
    std::string space_id;
    int opening_index = -1;
    int storey = 0;
    WallAxis axis = WallAxis::X;
    double coordinate = 0.0;
    bool right_fin = false;

    std::string to_string() const;

    friend bool operator==(const DesignVariable&, const DesignVariable&) = default;
};

struct Strategy {
    std::vector<VariableKind> order = default_variable_order();
    int steps_per_variable = 12;
    int max_passes = 3;
    double feasibility_tolerance = 0.0;

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

std::vector<std::string> strategy_issues(const Strategy& s);

inline constexpr double kMaxShadingDepth = 1.5;

struct OptContext {
    const DesignProgram* program = nullptr;
    const WeatherYear* weather = nullptr;
    std::map<std::string, ZoneUse> uses;
    ComfortModel comfort;
    double w_heat = 1.0;
    double w_cool = 1.0;
};

enum class StepStatus : unsigned char { Kept, Changed, Infeasible };
std::string_view step_status_name(StepStatus s);

struct TraceStep {
    DesignVariable variable;
    std::vector<double> candidates;
    std::vector<double> objectives;  // NaN for candidates discarded by the feasibility guard
    double current = 0.0;
    double chosen = 0.0;
    double objective_before = 0.0;
    double objective_after = 0.0;
    StepStatus status = StepStatus::Kept;
};

struct OptTrace {
    std::vector<TraceStep> steps;
    double initial_objective = 0.0;
    double final_objective = 0.0;
    int passes = 0;
};

struct SeqoptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<DesignVariable> enumerate_variables(const Building& b, const Strategy& s);

// Current value of v in b, in the units domain_of uses (degrees, metres, side index 0..3, 0/1).
std::optional<double> variable_value(const Building& b, const DesignVariable& v);
std::vector<double> domain_of(const DesignVariable& v, const Building& b, const DesignProgram& p, const Strategy& s);

// b with v set to value; nullopt when the value cannot be applied.
std::optional<Building> apply_variable(const Building& b, const DesignVariable& v, double value, const DesignProgram& p);

double discomfort_of(const Building& b, const OptContext& ctx);

struct VariableResult {
    Building building;
    TraceStep step;
};

// baseline_penalty: overlap + overflow the candidates may not exceed beyond the tolerance;
// defaults to the penalties of b itself.
VariableResult optimize_variable(const Building& b, const DesignVariable& v, const OptContext& ctx, const Strategy& s,
                                 std::optional<double> baseline_objective = std::nullopt,
                                 std::optional<double> baseline_penalty = std::nullopt);

struct RunResult {
    Building building;
    OptTrace trace;
};

// Called after every step with the steps done and an upper bound on the trace length.
using StepProgressFn = std::function<void(std::size_t done, std::size_t bound)>;

RunResult run(const Building& b, const OptContext& ctx, const Strategy& s, const StepProgressFn& progress = {});

}  // namespace planforge
