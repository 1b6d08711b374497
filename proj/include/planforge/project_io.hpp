#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "planforge/comfort.hpp"
#include "planforge/generator.hpp"
#include "planforge/indicators.hpp"
#include "planforge/program.hpp"
#include "planforge/seqopt.hpp"
#include "planforge/thermal.hpp"

namespace planforge {

using Json = nlohmann::json;

inline constexpr const char* kProjectFormat = "planforge-project";
inline constexpr int kProjectVersion = 1;

// Weather file and comfort model a solution was last assessed against.
struct AssessmentRef {
    std::string weather;
    ComfortModel comfort;

    friend bool operator==(const AssessmentRef&, const AssessmentRef&) = default;
};

struct Solution {
    std::string id;
    Building building;
    std::optional<PerformanceVector> performance;
    std::optional<double> objective;  // weighted layout objective
    std::optional<DiscomfortResult> discomfort;
    std::optional<AssessmentRef> assessed_with;
    std::optional<OptTrace> trace;
    std::string source;  // id of the solution this one was optimized from
};

struct Project {
    std::string id;
    std::string name;
    DesignProgram program;
    GeneratorConfig generator;
    Weights weights = Weights::defaults();
    Strategy strategy;
    std::map<std::string, ZoneUse> zone_uses;  // by space id; missing spaces use the defaults of their function
    ComfortModel comfort = ComfortModel::en15251(2);
    double heating_weight = 1.0;
    double cooling_weight = 1.0;
    std::string weather;  // id of an uploaded weather file
    std::vector<Solution> solutions;
    std::string created;  // ISO 8601, UTC
    std::string updated;

    const Solution* find_solution(std::string_view id) const;
    Solution* find_solution(std::string_view id);
};

// Thrown by the parsers; path names the first offending field, e.g. "program.space_reqs[1].area_min".
struct ProjectError : std::runtime_error {
    std::string path;
    ProjectError(std::string p, const std::string& msg)
        : std::runtime_error(p.empty() ? msg : p + ": " + msg), path(std::move(p)) {}
};

Json to_json(const Boundary& b);
Json to_json(const Building& b);
Json to_json(const DesignProgram& p);
Json to_json(const GeneratorConfig& c);
Json to_json(const Weights& w);
Json to_json(const PerformanceVector& v);
Json to_json(const Strategy& s);
Json to_json(const ZoneUse& u);
Json to_json(const DiscomfortResult& d);
Json to_json(const OptTrace& t);
Json to_json(const Solution& s);
Json to_json(const Project& p);

Boundary boundary_from_json(const Json& j, const std::string& path = "boundary");
Building building_from_json(const Json& j, const std::string& path = "building");
DesignProgram program_from_json(const Json& j, const std::string& path = "program");
GeneratorConfig generator_from_json(const Json& j, const std::string& path = "generator");
Weights weights_from_json(const Json& j, const std::string& path = "weights");
PerformanceVector performance_from_json(const Json& j, const std::string& path = "performance");
Strategy strategy_from_json(const Json& j, const std::string& path = "strategy");
ZoneUse zone_use_from_json(const Json& j, const std::string& path = "zone_use");
ComfortModel comfort_from_json(const Json& j, const std::string& path = "comfort");
DiscomfortResult discomfort_from_json(const Json& j, const std::string& path = "discomfort");
OptTrace trace_from_json(const Json& j, const std::string& path = "trace");
Solution solution_from_json(const Json& j, const std::string& path = "solution");
Project project_from_json(const Json& j);

std::string serialize_project(const Project& p);
Project parse_project(std::string_view text);
// Throws ProjectError with an empty path on malformed JSON.
Json parse_json_text(std::string_view text);

// Semantic problems (program, configuration, duplicate solution ids, ...); empty when usable.
std::vector<std::string> project_issues(const Project& p);

}  // namespace planforge
