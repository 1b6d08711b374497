#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "planforge/csv.hpp"
#include "planforge/dxf.hpp"
#include "planforge/project_io.hpp"
#include "planforge/service.hpp"
#include "planforge/svg.hpp"
#include "planforge/weather.hpp"

namespace fs = std::filesystem;
using namespace planforge;

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kRuntime = 2, kUsage = 3 };

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string msg) { throw Failure{code, std::move(msg)}; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kRuntime, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) fail(kRuntime, "cannot write " + path.string());
}

Project load_project(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return parse_project(text);
    } catch (const ProjectError& e) {
        fail(kInvalid, path + ": " + e.what());
    }
}

WeatherYear load_weather(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return parse_epw(text);
    } catch (const WeatherError& e) {
        fail(kInvalid, path + ": " + e.what());
    }
}

ComfortModel comfort_arg(const std::string& s, const ComfortModel& fallback) {
    if (s.empty()) return fallback;
    try {
        return comfort_from_string(s);
    } catch (const std::invalid_argument& e) {
        fail(kUsage, e.what());
    }
}

const Solution& pick_solution(const Project& p, const std::string& id, const std::string& path) {
    if (p.solutions.empty()) fail(kInvalid, path + ": no solution in document");
    if (id.empty()) return p.solutions.front();
    const Solution* s = p.find_solution(id);
    if (!s) fail(kInvalid, path + ": no solution '" + id + "'");
    return *s;
}

Project single_solution(const Project& p, Solution s) {
    Project out = p;
    out.solutions = {std::move(s)};
    return out;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

fs::path beside(const std::string& file, const std::string& suffix) {
    const fs::path p(file);
    return p.parent_path() / (p.stem().string() + suffix);
}

struct Common {
    bool json = false;
};

int cmd_validate(const std::string& file, const Common& c) {
    const std::string text = read_text(file);
    std::vector<std::string> issues;
    try {
        issues = project_issues(parse_project(text));
    } catch (const ProjectError& e) {
        issues.push_back(e.what());
    }
    if (c.json) {
        std::cout << Json{{"file", file}, {"valid", issues.empty()}, {"issues", issues}}.dump(2) << "\n";
    } else {
        for (const auto& i : issues) std::cout << i << "\n";
    }
    return issues.empty() ? kOk : kInvalid;
}

struct GenerateArgs {
    std::string file;
    int count = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> max_evaluations;
    std::string out = ".";
};

int cmd_generate(const GenerateArgs& a, const Common& c) {
    if (a.count < 1) fail(kUsage, "--count must be >= 1");
    const Project p = load_project(a.file);
    if (auto issues = project_issues(p); !issues.empty()) {
        for (const auto& i : issues) std::cerr << i << "\n";
        return kInvalid;
    }
    GeneratorConfig cfg = p.generator;
    if (a.seed) cfg.seed = *a.seed;
    if (a.max_evaluations) cfg.max_evaluations = *a.max_evaluations;
    if (auto issues = config_issues(cfg); !issues.empty()) fail(kUsage, issues.front());
    fs::create_directories(a.out);
    const std::string base = p.id.empty() ? fs::path(a.file).stem().string() : p.id;
    Json rows = Json::array();
    if (!c.json) std::printf("%-24s %16s %12s\n", "solution", "objective", "evaluations");
    for (int k = 0; k < a.count; ++k) {
        GeneratorConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(k);
        const EvolveReport r = evolve(p.program, run_cfg, p.weights);
        const Individual& best = r.solutions.front();
        Solution s;
        s.id = base + "-s" + std::to_string(k + 1);
        s.building = best.building;
        s.performance = best.perf;
        s.objective = best.objective;
        const fs::path file = fs::path(a.out) / (s.id + ".json");
        write_text(file, serialize_project(single_solution(p, s)));
        if (c.json) {
            rows.push_back({{"solution", s.id}, {"objective", best.objective}, {"seed", run_cfg.seed},
                            {"evaluations", r.evaluations}, {"file", file.string()}, {"performance", to_json(best.perf)}});
        } else {
            std::printf("%-24s %16.6f %12lld\n", s.id.c_str(), best.objective, static_cast<long long>(r.evaluations));
        }
    }
    if (c.json) std::cout << Json{{"solutions", rows}}.dump(2) << "\n";
    return kOk;
}

struct AssessArgs {
    std::string file;
    std::string weather;
    std::string comfort;
    std::string solution;
    std::string csv;
};

int cmd_assess(const AssessArgs& a, const Common& c) {
    const Project p = load_project(a.file);
    const Solution& s = pick_solution(p, a.solution, a.file);
    const ComfortModel model = comfort_arg(a.comfort, p.comfort);
    const WeatherYear w = load_weather(a.weather);
    Assessment r;
    try {
        r = assess(s.building, p.zone_uses, w, model, p.heating_weight, p.cooling_weight);
    } catch (const ModelError& e) {
        fail(kRuntime, e.what());
    }
    const fs::path csv = a.csv.empty() ? beside(a.file, ".csv") : fs::path(a.csv);
    write_text(csv, results_csv(r.sim, w));
    if (c.json) {
        std::cout << Json{{"solution", s.id},
                          {"comfort", comfort_to_string(model)},
                          {"objective", r.objective},
                          {"discomfort", to_json(r.discomfort)},
                          {"csv", csv.string()}}
                         .dump(2)
                  << "\n";
        return kOk;
    }
    std::printf("%-20s %14s %14s\n", "space", "heating_dh", "cooling_dh");
    for (const auto& d : r.discomfort.spaces) std::printf("%-20s %14.3f %14.3f\n", d.space_id.c_str(), d.heating_dh, d.cooling_dh);
    std::printf("%-20s %14.3f %14.3f\n", "total", r.discomfort.heating_total, r.discomfort.cooling_total);
    std::printf("objective %s\n", fmt("%.6f", r.objective).c_str());
    return kOk;
}

struct OptimizeArgs {
    std::string file;
    std::string weather;
    std::string strategy;
    std::string comfort;
    std::string solution;
    std::string out;
};

int cmd_optimize(const OptimizeArgs& a, const Common& c) {
    const Project p = load_project(a.file);
    const Solution& s = pick_solution(p, a.solution, a.file);
    const ComfortModel model = comfort_arg(a.comfort, p.comfort);
    Strategy strategy = p.strategy;
    if (!a.strategy.empty()) {
        const std::string text = read_text(a.strategy);
        try {
            strategy = strategy_from_json(parse_json_text(text), "strategy");
        } catch (const ProjectError& e) {
            fail(kInvalid, a.strategy + ": " + e.what());
        }
    }
    if (auto issues = strategy_issues(strategy); !issues.empty()) fail(kInvalid, "strategy: " + issues.front());
    const WeatherYear w = load_weather(a.weather);
    OptContext ctx{&p.program, &w, p.zone_uses, model, p.heating_weight, p.cooling_weight};
    RunResult r;
    Assessment after;
    try {
        r = run(s.building, ctx, strategy);
        after = assess(r.building, ctx.uses, w, model, ctx.w_heat, ctx.w_cool);
    } catch (const std::exception& e) {
        fail(kRuntime, e.what());
    }
    Solution o;
    o.id = s.id + "-opt";
    o.building = r.building;
    o.performance = evaluate(r.building, p.program);
    o.objective = aggregate(*o.performance, p.weights);
    o.discomfort = after.discomfort;
    o.trace = r.trace;
    o.source = s.id;
    const fs::path out = a.out.empty() ? beside(a.file, "-opt.json") : fs::path(a.out);
    const fs::path trace = out.parent_path() / (out.stem().string() + "-trace.csv");
    write_text(out, serialize_project(single_solution(p, o)));
    write_text(trace, trace_csv(r.trace));
    if (c.json) {
        std::cout << Json{{"solution", o.id},
                          {"before", r.trace.initial_objective},
                          {"after", r.trace.final_objective},
                          {"steps", r.trace.steps.size()},
                          {"passes", r.trace.passes},
                          {"file", out.string()},
                          {"trace", trace.string()}}
                         .dump(2)
                  << "\n";
    } else {
        std::printf("before %s\nafter  %s\nsteps  %zu\n", fmt("%.6f", r.trace.initial_objective).c_str(),
                    fmt("%.6f", r.trace.final_objective).c_str(), r.trace.steps.size());
    }
    return kOk;
}

struct ExportArgs {
    std::string file;
    std::string format;
    std::string out;
    std::string solution;
    std::string weather;
    int storey = 0;
};

int cmd_export(const ExportArgs& a, const Common& c) {
    const Project p = load_project(a.file);
    const Solution& s = pick_solution(p, a.solution, a.file);
    std::string body;
    std::string ext;
    if (a.format == "dxf2d") {
        body = to_dxf(s.building, DxfMode::plan2d(a.storey));
        ext = ".dxf";
    } else if (a.format == "dxf3d") {
        body = to_dxf(s.building, DxfMode::wire3d());
        ext = ".dxf";
    } else if (a.format == "svg") {
        FloorPlan plan{a.storey, {}};
        for (const auto& fp : s.building.plans) {
            if (fp.storey == a.storey) plan = fp;
        }
        body = to_svg(plan, s.building.boundary);
        ext = ".svg";
    } else if (a.format == "csv") {
        if (a.weather.empty()) fail(kUsage, "--weather is required for csv");
        const WeatherYear w = load_weather(a.weather);
        try {
            body = results_csv(simulate(s.building, p.zone_uses, w), w);
        } catch (const ModelError& e) {
            fail(kRuntime, e.what());
        }
        ext = ".csv";
    } else if (a.format == "json") {
        body = serialize_project(single_solution(p, s));
        ext = ".json";
    } else {
        fail(kUsage, "unknown format '" + a.format + "'");
    }
    const fs::path out = a.out.empty() ? beside(a.file, "-" + a.format + ext) : fs::path(a.out);
    write_text(out, body);
    if (c.json) std::cout << Json{{"file", out.string()}, {"bytes", body.size()}}.dump(2) << "\n";
    else std::cout << out.string() << "\n";
    return kOk;
}

struct ServeArgs {
    std::string data_dir;
    std::string listen;
    int workers = 0;
    std::string static_dir;
};

int cmd_serve(const ServeArgs& a, const Common& c) {
    ServiceConfig cfg = ServiceConfig::from_env();
    if (!a.data_dir.empty()) cfg.data_dir = a.data_dir;
    if (!a.static_dir.empty()) cfg.static_dir = a.static_dir;
    if (a.workers > 0) cfg.workers = a.workers;
    if (!a.listen.empty()) {
        const auto colon = a.listen.rfind(':');
        if (colon == std::string::npos) fail(kUsage, "--listen expects host:port");
        cfg.host = a.listen.substr(0, colon);
        cfg.port = std::atoi(a.listen.c_str() + colon + 1);
    }
    Service service(cfg);
    HttpServer http(service);
    const int port = http.bind(cfg.host, cfg.port);
    if (port < 0) fail(kRuntime, "cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
    if (c.json) std::cout << Json{{"host", cfg.host}, {"port", port}, {"data_dir", cfg.data_dir.string()}}.dump() << std::endl;
    else std::cout << "listening on " << cfg.host << ":" << port << std::endl;
    return http.listen() ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floor plan generation, thermal assessment and design optimization"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_flag("--json", common.json, "Machine-readable output");

    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "Check a project file");
    validate->add_option("project", validate_file, "Project file")->required();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate floor plan solutions");
    generate->add_option("project", gen.file, "Project file")->required();
    generate->add_option("--count", gen.count, "Number of solutions");
    generate->add_option("--seed", gen.seed, "Seed of the first run");
    generate->add_option("--max-evaluations", gen.max_evaluations, "Evaluation budget per run");
    generate->add_option("--out", gen.out, "Output directory");

    AssessArgs as;
    auto* assess_cmd = app.add_subcommand("assess", "Simulate a solution and report degree-hours");
    assess_cmd->add_option("solution", as.file, "Solution file")->required();
    assess_cmd->add_option("--weather", as.weather, "EPW weather file")->required();
    assess_cmd->add_option("--comfort", as.comfort, "fixed:L:U, en15251:I|II|III or ashrae55:80|90");
    assess_cmd->add_option("--solution-id", as.solution, "Solution inside the file");
    assess_cmd->add_option("--csv", as.csv, "Temperature CSV path");

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "Sequentially optimize a solution's design variables");
    optimize->add_option("solution", opt.file, "Solution file")->required();
    optimize->add_option("--weather", opt.weather, "EPW weather file")->required();
    optimize->add_option("--strategy", opt.strategy, "Strategy JSON file");
    optimize->add_option("--comfort", opt.comfort, "Comfort model");
    optimize->add_option("--solution-id", opt.solution, "Solution inside the file");
    optimize->add_option("--out", opt.out, "Optimized solution path");

    ExportArgs ex;
    auto* export_cmd = app.add_subcommand("export", "Write a solution as DXF, SVG, CSV or JSON");
    export_cmd->add_option("solution", ex.file, "Solution file")->required();
    export_cmd->add_option("--format", ex.format, "dxf2d, dxf3d, svg, csv or json")->required();
    export_cmd->add_option("--out", ex.out, "Output path");
    export_cmd->add_option("--storey", ex.storey, "Storey for dxf2d and svg");
    export_cmd->add_option("--weather", ex.weather, "EPW weather file (csv)");
    export_cmd->add_option("--solution-id", ex.solution, "Solution inside the file");

    ServeArgs sv;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--data-dir", sv.data_dir, "Data directory");
    serve->add_option("--listen", sv.listen, "host:port");
    serve->add_option("--workers", sv.workers, "Job worker threads");
    serve->add_option("--static-dir", sv.static_dir, "Web interface bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(validate_file, common);
        if (*generate) return cmd_generate(gen, common);
        if (*assess_cmd) return cmd_assess(as, common);
        if (*optimize) return cmd_optimize(opt, common);
        if (*export_cmd) return cmd_export(ex, common);
        if (*serve) return cmd_serve(sv, common);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
