#include "planforge/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <deque>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "planforge/csv.hpp"
#include "planforge/dxf.hpp"
#include "planforge/project_io.hpp"
#include "planforge/svg.hpp"
#include "planforge/weather.hpp"

namespace planforge {

namespace fs = std::filesystem;

namespace {

struct Cancelled {};

struct HttpError {
    int status;
    Json body;
};

[[noreturn]] void fail(int status, const std::string& msg, Json extra = Json::object()) {
    extra["error"] = msg;
    throw HttpError{status, std::move(extra)};
}

HttpResponse json_response(int status, const Json& j) { return {status, "application/json", j.dump(2) + "\n", {}}; }

std::string now_iso() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string content_id(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "w%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Write-to-temp, fsync, rename: readers only ever see a complete file.
void write_atomic(const fs::path& target, std::string_view data) {
    const fs::path tmp = target.string() + ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw std::runtime_error("cannot write " + tmp.string() + ": " + std::strerror(errno));
    std::size_t done = 0;
    while (done < data.size()) {
        const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            throw std::runtime_error("cannot write " + tmp.string() + ": " + std::strerror(errno));
        }
        done += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
    fs::rename(tmp, target);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::stringstream ss(path);
    for (std::string part; std::getline(ss, part, '/');) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

int solution_number(const std::string& project_id, const std::string& solution_id) {
    const std::string prefix = project_id + "-s";
    if (solution_id.rfind(prefix, 0) != 0) return 0;
    return std::atoi(solution_id.c_str() + prefix.size());
}

Json solution_summary(const Solution& s) {
    Json j = {{"id", s.id}, {"assessed", s.discomfort.has_value()}, {"optimized", s.trace.has_value()}};
    if (s.objective) j["objective"] = *s.objective;
    if (s.discomfort) {
        j["heating_dh"] = s.discomfort->heating_total;
        j["cooling_dh"] = s.discomfort->cooling_total;
    }
    if (!s.source.empty()) j["source"] = s.source;
    return j;
}

}  // namespace

std::string_view job_kind_name(JobKind k) {
    switch (k) {
        case JobKind::Generate: return "generate";
        case JobKind::Assess: return "assess";
        case JobKind::Optimize: return "optimize";
    }
    return "generate";
}

std::string_view job_state_name(JobState s) {
    switch (s) {
        case JobState::Queued: return "queued";
        case JobState::Running: return "running";
        case JobState::Done: return "done";
        case JobState::Failed: return "failed";
    }
    return "queued";
}

bool legal_transition(JobState from, JobState to) {
    return (from == JobState::Queued && (to == JobState::Running || to == JobState::Failed)) ||
           (from == JobState::Running && (to == JobState::Done || to == JobState::Failed));
}

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig c;
    if (const char* v = std::getenv("PLANFORGE_DATA_DIR"); v && *v) c.data_dir = v;
    if (const char* v = std::getenv("PLANFORGE_LISTEN"); v && *v) {
        const std::string s = v;
        const auto colon = s.rfind(':');
        if (colon == std::string::npos) {
            c.port = std::atoi(s.c_str());
        } else {
            if (colon > 0) c.host = s.substr(0, colon);
            c.port = std::atoi(s.c_str() + colon + 1);
        }
    }
    if (const char* v = std::getenv("PLANFORGE_WORKERS"); v && *v) c.workers = std::max(1, std::atoi(v));
    if (const char* v = std::getenv("PLANFORGE_ASSESS_JOB_THRESHOLD"); v && *v) {
        c.assess_job_threshold = static_cast<std::size_t>(std::max(0, std::atoi(v)));
    }
    if (const char* v = std::getenv("PLANFORGE_STATIC_DIR"); v && *v) c.static_dir = v;
    return c;
}

struct Service::Impl {
    struct Slot {
        mutable std::shared_mutex mu;
        Project project;
        bool job_active = false;  // guarded by Impl::mu
    };

    ServiceConfig cfg;
    fs::path projects_dir;
    fs::path weather_dir;

    mutable std::mutex mu;
    std::map<std::string, std::shared_ptr<Slot>> projects;
    std::map<std::string, std::string> solution_owner;
    std::map<std::string, JobInfo> jobs;
    std::map<std::string, std::shared_ptr<const WeatherYear>> weather_cache;
    int next_project = 1;
    int next_job = 1;

    std::deque<std::function<void()>> queue;
    std::condition_variable work_cv;
    std::condition_variable idle_cv;
    int active = 0;
    std::atomic<bool> stopping{false};
    std::vector<std::thread> workers;

    explicit Impl(ServiceConfig c) : cfg(std::move(c)) {
        projects_dir = cfg.data_dir / "projects";
        weather_dir = cfg.data_dir / "weather";
        fs::create_directories(projects_dir);
        fs::create_directories(weather_dir);
        load();
        for (int i = 0; i < std::max(1, cfg.workers); ++i) workers.emplace_back([this] { worker(); });
    }

    ~Impl() {
        stopping = true;
        {
            std::lock_guard lk(mu);
            queue.clear();
        }
        work_cv.notify_all();
        for (auto& t : workers) t.join();
    }

    void load() {
        for (const auto& e : fs::directory_iterator(projects_dir)) {
            const auto p = e.path();
            if (p.extension() == ".tmp") {
                fs::remove(p);
                continue;
            }
            if (p.extension() != ".json") continue;
            auto slot = std::make_shared<Slot>();
            try {
                slot->project = parse_project(read_file(p));
            } catch (const std::exception& ex) {
                std::fprintf(stderr, "skipping %s: %s\n", p.c_str(), ex.what());
                continue;
            }
            const std::string id = slot->project.id;
            if (id.size() > 1 && id[0] == 'p') next_project = std::max(next_project, std::atoi(id.c_str() + 1) + 1);
            for (const auto& s : slot->project.solutions) solution_owner[s.id] = id;
            projects[id] = std::move(slot);
        }
    }

    void worker() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock lk(mu);
                work_cv.wait(lk, [this] { return stopping || !queue.empty(); });
                if (stopping) return;
                task = std::move(queue.front());
                queue.pop_front();
                ++active;
            }
            task();
            {
                std::lock_guard lk(mu);
                --active;
            }
            idle_cv.notify_all();
        }
    }

    void save(const Project& p) { write_atomic(projects_dir / (p.id + ".json"), serialize_project(p)); }

    std::shared_ptr<Slot> slot_of(const std::string& id) {
        std::lock_guard lk(mu);
        const auto it = projects.find(id);
        if (it == projects.end()) fail(404, "unknown project '" + id + "'");
        return it->second;
    }

    std::pair<std::shared_ptr<Slot>, std::string> solution_slot(const std::string& sid) {
        std::string pid;
        {
            std::lock_guard lk(mu);
            const auto it = solution_owner.find(sid);
            if (it == solution_owner.end()) fail(404, "unknown solution '" + sid + "'");
            pid = it->second;
        }
        return {slot_of(pid), pid};
    }

    std::shared_ptr<const WeatherYear> weather(const std::string& id) {
        {
            std::lock_guard lk(mu);
            if (const auto it = weather_cache.find(id); it != weather_cache.end()) return it->second;
        }
        const fs::path file = weather_dir / (id + ".epw");
        if (id.empty() || id.find('/') != std::string::npos || !fs::exists(file)) fail(404, "unknown weather '" + id + "'");
        auto w = std::make_shared<const WeatherYear>(parse_epw(read_file(file)));
        std::lock_guard lk(mu);
        return weather_cache.emplace(id, std::move(w)).first->second;
    }

    void set_state(const std::string& jid, JobState s) {
        std::lock_guard lk(mu);
        auto& j = jobs.at(jid);
        if (legal_transition(j.state, s)) j.state = s;
    }

    void set_progress(const std::string& jid, double f) {
        std::lock_guard lk(mu);
        auto& j = jobs.at(jid);
        j.progress = std::clamp(f, j.progress, 1.0);
    }

    // Registers a queued job on a project; 409 while another job holds it.
    std::string start_job(const std::shared_ptr<Slot>& slot, const std::string& pid, JobKind kind,
                          std::function<std::vector<std::string>(const std::string& jid)> body) {
        std::lock_guard lk(mu);
        if (slot->job_active) fail(409, "a job is already running on project '" + pid + "'");
        slot->job_active = true;
        const std::string jid = "j" + std::to_string(next_job++);
        jobs[jid] = JobInfo{jid, pid, kind, JobState::Queued, 0.0, {}, {}};
        queue.push_back([this, slot, jid, body = std::move(body)] {
            set_state(jid, JobState::Running);
            std::vector<std::string> ids;
            std::string error;
            try {
                ids = body(jid);
            } catch (const Cancelled&) {
                error = "service stopped";
            } catch (const std::exception& e) {
                error = e.what();
            }
            std::lock_guard l2(mu);
            slot->job_active = false;
            auto& j = jobs.at(jid);
            if (error.empty()) {
                j.solutions = std::move(ids);
                j.progress = 1.0;
                j.state = JobState::Done;
            } else {
                j.error = error;
                j.state = JobState::Failed;
            }
        });
        work_cv.notify_one();
        return jid;
    }

    std::vector<std::string> append_solutions(const std::shared_ptr<Slot>& slot, std::vector<Solution> sols) {
        std::unique_lock lk(slot->mu);
        Project& p = slot->project;
        int n = 0;
        for (const auto& s : p.solutions) n = std::max(n, solution_number(p.id, s.id));
        std::vector<std::string> ids;
        for (auto& s : sols) {
            s.id = p.id + "-s" + std::to_string(++n);
            ids.push_back(s.id);
            p.solutions.push_back(std::move(s));
        }
        p.updated = now_iso();
        save(p);
        std::lock_guard g(mu);
        for (const auto& id : ids) solution_owner[id] = p.id;
        return ids;
    }

    // ---- endpoints

    HttpResponse create_project(const std::string& body) {
        const Json j = parse_body(body);
        Project p;
        try {
            if (j.is_object() && j.contains("program")) {
                p = project_from_json(j);
                p.solutions.clear();
            } else {
                p.program = program_from_json(j, "program");
            }
        } catch (const ProjectError& e) {
            fail(400, e.what(), {{"path", e.path}});
        }
        if (auto issues = validate_program(p.program); !issues.empty()) fail(400, "invalid program", {{"issues", issues}});
        if (auto issues = project_issues(p); !issues.empty()) fail(400, "invalid project", {{"issues", issues}});
        auto slot = std::make_shared<Slot>();
        {
            std::lock_guard lk(mu);
            p.id = "p" + std::to_string(next_project++);
        }
        p.created = p.updated = now_iso();
        if (p.name.empty()) p.name = p.id;
        slot->project = std::move(p);
        const std::string id = slot->project.id;
        save(slot->project);
        {
            std::lock_guard lk(mu);
            projects[id] = slot;
        }
        return json_response(201, {{"id", id}});
    }

    HttpResponse list_projects() {
        std::vector<std::shared_ptr<Slot>> slots;
        {
            std::lock_guard lk(mu);
            for (const auto& [_, s] : projects) slots.push_back(s);
        }
        Json out = Json::array();
        for (const auto& s : slots) {
            std::shared_lock lk(s->mu);
            out.push_back({{"id", s->project.id}, {"name", s->project.name}, {"solutions", s->project.solutions.size()}});
        }
        return json_response(200, out);
    }

    HttpResponse get_project(const std::string& id) {
        auto slot = slot_of(id);
        std::shared_lock lk(slot->mu);
        return json_response(200, to_json(slot->project));
    }

    HttpResponse put_program(const std::string& id, const std::string& body) {
        auto slot = slot_of(id);
        DesignProgram prog;
        try {
            prog = program_from_json(parse_body(body), "program");
        } catch (const ProjectError& e) {
            fail(400, e.what(), {{"path", e.path}});
        }
        if (auto issues = validate_program(prog); !issues.empty()) fail(400, "invalid program", {{"issues", issues}});
        {
            std::lock_guard lk(mu);
            if (slot->job_active) fail(409, "a job is running on project '" + id + "'");
        }
        std::unique_lock lk(slot->mu);
        slot->project.program = std::move(prog);
        slot->project.updated = now_iso();
        save(slot->project);
        return json_response(200, {{"id", id}});
    }

    HttpResponse generate(const std::string& id, const std::string& body) {
        auto slot = slot_of(id);
        const Json j = body.empty() ? Json::object() : parse_body(body);
        if (!j.is_object()) fail(400, "expected an object");
        for (const auto& [k, _] : j.items()) {
            if (k != "count" && k != "seed" && k != "max_evaluations") fail(400, "unknown field '" + k + "'", {{"path", k}});
        }
        int count = 1;
        DesignProgram prog;
        GeneratorConfig cfg_gen;
        Weights weights;
        {
            std::shared_lock lk(slot->mu);
            prog = slot->project.program;
            cfg_gen = slot->project.generator;
            weights = slot->project.weights;
        }
        if (j.contains("count")) {
            if (!j["count"].is_number_integer()) fail(400, "count must be an integer", {{"path", "count"}});
            count = j["count"].get<int>();
        }
        if (count < 1) fail(400, "count must be >= 1", {{"path", "count"}});
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) fail(400, "seed must be a non-negative integer", {{"path", "seed"}});
            cfg_gen.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("max_evaluations")) {
            if (!j["max_evaluations"].is_number_integer()) fail(400, "max_evaluations must be an integer", {{"path", "max_evaluations"}});
            cfg_gen.max_evaluations = j["max_evaluations"].get<std::int64_t>();
        }
        if (auto issues = config_issues(cfg_gen); !issues.empty()) fail(400, "invalid generator config", {{"issues", issues}});
        const std::string jid = start_job(slot, id, JobKind::Generate, [=, this](const std::string& job_id) {
            std::vector<Solution> sols;
            for (int k = 0; k < count; ++k) {
                GeneratorConfig c = cfg_gen;
                c.seed = cfg_gen.seed + static_cast<std::uint64_t>(k);
                const auto report = evolve(prog, c, weights, [&](std::int64_t done, std::int64_t max) {
                    if (stopping) throw Cancelled{};
                    const double per = max > 0 ? static_cast<double>(done) / static_cast<double>(max) : 1.0;
                    set_progress(job_id, (k + std::min(per, 1.0)) / count);
                });
                if (report.solutions.empty()) throw std::runtime_error("generation produced no solution");
                const Individual& best = report.solutions.front();
                Solution s;
                s.building = best.building;
                s.performance = best.perf;
                s.objective = best.objective;
                sols.push_back(std::move(s));
            }
            return append_solutions(slot, std::move(sols));
        });
        return json_response(202, {{"job", jid}});
    }

    HttpResponse get_job(const std::string& jid) {
        std::lock_guard lk(mu);
        const auto it = jobs.find(jid);
        if (it == jobs.end()) fail(404, "unknown job '" + jid + "'");
        const JobInfo& j = it->second;
        Json out = {{"id", j.id},
                    {"project", j.project_id},
                    {"kind", std::string(job_kind_name(j.kind))},
                    {"state", std::string(job_state_name(j.state))},
                    {"progress", j.progress},
                    {"solutions", j.solutions}};
        if (!j.error.empty()) out["error"] = j.error;
        return json_response(200, out);
    }

    HttpResponse list_solutions(const std::string& id) {
        auto slot = slot_of(id);
        std::shared_lock lk(slot->mu);
        Json out = Json::array();
        for (const auto& s : slot->project.solutions) out.push_back(solution_summary(s));
        return json_response(200, out);
    }

    HttpResponse get_solution(const std::string& sid) {
        auto [slot, pid] = solution_slot(sid);
        std::shared_lock lk(slot->mu);
        const Solution* s = slot->project.find_solution(sid);
        if (!s) fail(404, "unknown solution '" + sid + "'");
        Json j = to_json(*s);
        j["project"] = pid;
        return json_response(200, j);
    }

    struct AssessInputs {
        Building building;
        std::map<std::string, ZoneUse> uses;
        ComfortModel comfort;
        double w_heat = 1.0;
        double w_cool = 1.0;
        std::string weather_id;
        std::shared_ptr<const WeatherYear> weather;
    };

    Json run_assessment(const std::shared_ptr<Slot>& slot, const std::string& sid, const AssessInputs& in) {
        Assessment a;
        try {
            a = assess(in.building, in.uses, *in.weather, in.comfort, in.w_heat, in.w_cool);
        } catch (const ModelError& e) {
            fail(422, e.what(), {{"space", e.space_id}});
        }
        std::unique_lock lk(slot->mu);
        Solution* s = slot->project.find_solution(sid);
        if (!s) fail(404, "unknown solution '" + sid + "'");
        s->discomfort = a.discomfort;
        s->assessed_with = AssessmentRef{in.weather_id, in.comfort};
        if (slot->project.weather.empty()) slot->project.weather = in.weather_id;
        slot->project.updated = now_iso();
        save(slot->project);
        return {{"solution", sid},
                {"weather", in.weather_id},
                {"comfort", comfort_to_string(in.comfort)},
                {"objective", a.objective},
                {"discomfort", to_json(a.discomfort)}};
    }

    HttpResponse assess_solution(const std::string& sid, const std::string& body) {
        auto [slot, pid] = solution_slot(sid);
        const Json j = body.empty() ? Json::object() : parse_body(body);
        if (!j.is_object()) fail(400, "expected an object");
        AssessInputs in;
        {
            std::shared_lock lk(slot->mu);
            const Solution* s = slot->project.find_solution(sid);
            if (!s) fail(404, "unknown solution '" + sid + "'");
            in.building = s->building;
            in.uses = slot->project.zone_uses;
            in.comfort = slot->project.comfort;
            in.w_heat = slot->project.heating_weight;
            in.w_cool = slot->project.cooling_weight;
            in.weather_id = slot->project.weather;
        }
        for (const auto& [k, v] : j.items()) {
            if (k == "weather") {
                if (!v.is_string()) fail(400, "weather must be a string", {{"path", "weather"}});
                in.weather_id = v.get<std::string>();
            } else if (k == "comfort") {
                try {
                    in.comfort = comfort_from_json(v, "comfort");
                } catch (const ProjectError& e) {
                    fail(400, e.what(), {{"path", e.path}});
                }
            } else {
                fail(400, "unknown field '" + k + "'", {{"path", k}});
            }
        }
        if (in.weather_id.empty()) fail(400, "weather required", {{"path", "weather"}});
        in.weather = weather(in.weather_id);
        if (in.building.space_count() <= cfg.assess_job_threshold) return json_response(200, run_assessment(slot, sid, in));
        const std::string jid = start_job(slot, pid, JobKind::Assess, [=, this](const std::string&) {
            try {
                run_assessment(slot, sid, in);
            } catch (const HttpError& e) {
                throw std::runtime_error(e.body.value("error", "assessment failed"));
            }
            return std::vector<std::string>{sid};
        });
        return json_response(202, {{"job", jid}});
    }

    HttpResponse optimize_solution(const std::string& sid, const std::string& body) {
        auto [slot, pid] = solution_slot(sid);
        Strategy strategy;
        Building building;
        AssessmentRef ref;
        DesignProgram prog;
        Weights weights;
        OptContext base;
        {
            std::shared_lock lk(slot->mu);
            const Solution* s = slot->project.find_solution(sid);
            if (!s) fail(404, "unknown solution '" + sid + "'");
            if (!s->assessed_with) fail(409, "solution '" + sid + "' has not been assessed");
            ref = *s->assessed_with;
            building = s->building;
            strategy = slot->project.strategy;
            prog = slot->project.program;
            weights = slot->project.weights;
            base.uses = slot->project.zone_uses;
            base.w_heat = slot->project.heating_weight;
            base.w_cool = slot->project.cooling_weight;
        }
        if (!body.empty()) {
            try {
                strategy = strategy_from_json(parse_body(body), "strategy");
            } catch (const ProjectError& e) {
                fail(400, e.what(), {{"path", e.path}});
            }
        }
        if (auto issues = strategy_issues(strategy); !issues.empty()) fail(400, "invalid strategy", {{"issues", issues}});
        auto w = weather(ref.weather);
        base.comfort = ref.comfort;
        const std::string jid = start_job(slot, pid, JobKind::Optimize, [=, this](const std::string& job_id) {
            OptContext ctx = base;
            ctx.program = &prog;
            ctx.weather = w.get();
            const RunResult r = run(building, ctx, strategy, [&](std::size_t done, std::size_t bound) {
                if (stopping) throw Cancelled{};
                set_progress(job_id, bound ? 0.95 * static_cast<double>(done) / static_cast<double>(bound) : 0.0);
            });
            Solution s;
            s.building = r.building;
            s.performance = evaluate(r.building, prog);
            s.objective = aggregate(*s.performance, weights);
            s.discomfort = assess(r.building, ctx.uses, *w, ctx.comfort, ctx.w_heat, ctx.w_cool).discomfort;
            s.assessed_with = ref;
            s.trace = r.trace;
            s.source = sid;
            return append_solutions(slot, {std::move(s)});
        });
        return json_response(202, {{"job", jid}});
    }

    HttpResponse export_solution(const std::string& sid, const std::map<std::string, std::string>& query) {
        auto [slot, pid] = solution_slot(sid);
        const auto fit = query.find("format");
        if (fit == query.end()) fail(400, "format required", {{"path", "format"}});
        const std::string format = fit->second;
        int storey = 0;
        if (const auto it = query.find("storey"); it != query.end()) storey = std::atoi(it->second.c_str());
        Solution sol;
        Project copy;
        {
            std::shared_lock lk(slot->mu);
            const Solution* s = slot->project.find_solution(sid);
            if (!s) fail(404, "unknown solution '" + sid + "'");
            sol = *s;
            if (format == "json" || format == "csv") {
                copy = slot->project;
                copy.solutions = {sol};
            }
        }
        if (format == "dxf2d") {
            return {200, "application/dxf", to_dxf(sol.building, DxfMode::plan2d(storey)),
                    sid + "-plan" + std::to_string(storey) + ".dxf"};
        }
        if (format == "dxf3d") return {200, "application/dxf", to_dxf(sol.building, DxfMode::wire3d()), sid + "-3d.dxf"};
        if (format == "svg") {
            FloorPlan plan{storey, {}};
            for (const auto& fp : sol.building.plans) {
                if (fp.storey == storey) plan = fp;
            }
            return {200, "image/svg+xml", to_svg(plan, sol.building.boundary), sid + "-plan" + std::to_string(storey) + ".svg"};
        }
        if (format == "csv") {
            if (!sol.assessed_with) fail(409, "solution '" + sid + "' has not been assessed");
            auto w = weather(sol.assessed_with->weather);
            const SimResult r = simulate(sol.building, copy.zone_uses, *w);
            return {200, "text/csv", results_csv(r, *w), sid + ".csv"};
        }
        if (format == "json") return {200, "application/json", serialize_project(copy), sid + ".json"};
        fail(400, "unknown format '" + format + "'", {{"path", "format"}});
    }

    HttpResponse upload_weather(const std::string& body) {
        WeatherYear w;
        try {
            w = parse_epw(body);
        } catch (const WeatherError& e) {
            fail(400, e.what());
        }
        const std::string id = content_id(body);
        const fs::path file = weather_dir / (id + ".epw");
        const bool existed = fs::exists(file);
        if (!existed) write_atomic(file, body);
        {
            std::lock_guard lk(mu);
            weather_cache.emplace(id, std::make_shared<const WeatherYear>(std::move(w)));
        }
        return json_response(existed ? 200 : 201, {{"id", id}});
    }

    static Json parse_body(const std::string& body) {
        try {
            return parse_json_text(body);
        } catch (const ProjectError& e) {
            fail(400, e.what());
        }
    }

    HttpResponse route(const std::string& method, const std::string& path, const std::map<std::string, std::string>& query,
                       const std::string& body) {
        const auto p = split_path(path);
        if (p.size() < 3 || p[0] != "api" || p[1] != "v1") fail(404, "no such endpoint");
        const std::string& res = p[2];
        const std::size_t n = p.size();
        if (res == "projects") {
            if (n == 3 && method == "POST") return create_project(body);
            if (n == 3 && method == "GET") return list_projects();
            if (n == 4 && method == "GET") return get_project(p[3]);
            if (n == 5 && p[4] == "program" && method == "PUT") return put_program(p[3], body);
            if (n == 5 && p[4] == "generate" && method == "POST") return generate(p[3], body);
            if (n == 5 && p[4] == "solutions" && method == "GET") return list_solutions(p[3]);
        } else if (res == "jobs") {
            if (n == 4 && method == "GET") return get_job(p[3]);
        } else if (res == "solutions") {
            if (n == 4 && method == "GET") return get_solution(p[3]);
            if (n == 5 && p[4] == "assess" && method == "POST") return assess_solution(p[3], body);
            if (n == 5 && p[4] == "optimize" && method == "POST") return optimize_solution(p[3], body);
            if (n == 5 && p[4] == "export" && method == "GET") return export_solution(p[3], query);
        } else if (res == "weather") {
            if (n == 3 && method == "POST") return upload_weather(body);
        }
        fail(404, "no such endpoint: " + method + " " + path);
    }
};

Service::Service(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
Service::~Service() = default;

const ServiceConfig& Service::config() const { return impl_->cfg; }

HttpResponse Service::handle(const std::string& method, const std::string& path,
                             const std::map<std::string, std::string>& query, const std::string& body) {
    try {
        return impl_->route(method, path, query, body);
    } catch (const HttpError& e) {
        return json_response(e.status, e.body);
    } catch (const std::exception& e) {
        return json_response(500, {{"error", e.what()}});
    }
}

std::optional<JobInfo> Service::job(const std::string& id) const {
    std::lock_guard lk(impl_->mu);
    const auto it = impl_->jobs.find(id);
    if (it == impl_->jobs.end()) return std::nullopt;
    return it->second;
}

void Service::wait_idle() {
    std::unique_lock lk(impl_->mu);
    impl_->idle_cv.wait(lk, [this] { return impl_->queue.empty() && impl_->active == 0; });
}

namespace {

constexpr const char* kPlaceholderPage =
    "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>planforge</title></head>\n"
    "<body><h1>planforge</h1><p>The web interface bundle is not installed. The REST API is served under "
    "<code>/api/v1</code>.</p></body></html>\n";

}  // namespace

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;

    explicit Impl(Service& s) : service(s) {
        const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            std::map<std::string, std::string> query;
            for (const auto& [k, v] : req.params) query.emplace(k, v);
            const HttpResponse r = service.handle(req.method, req.path, query, req.body);
            res.status = r.status;
            if (!r.filename.empty()) res.set_header("Content-Disposition", "attachment; filename=\"" + r.filename + "\"");
            res.set_content(r.body, r.content_type);
        };
        server.Get("/api/v1/.*", forward);
        server.Post("/api/v1/.*", forward);
        server.Put("/api/v1/.*", forward);
        server.Delete("/api/v1/.*", forward);
        const auto& dir = service.config().static_dir;
        if (!dir.empty() && fs::is_directory(dir)) {
            server.set_mount_point("/", dir.string());
        } else {
            server.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(kPlaceholderPage, "text/html");
            });
        }
    }
};

HttpServer::HttpServer(Service& s) : impl_(std::make_unique<Impl>(s)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace planforge
