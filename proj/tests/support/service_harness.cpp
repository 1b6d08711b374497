#include "support/service_harness.hpp"

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "planforge/project_io.hpp"
#include "planforge/weather.hpp"

extern char** environ;

namespace harness {

using namespace planforge;
using Clock = std::chrono::steady_clock;

namespace {

Reply to_reply(const httplib::Result& r) {
    if (!r) return {};
    return {r->status, r->body};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string& dir, const std::string& name) { return read_file(fs::path(dir) / name); }

struct Checks {
    std::vector<std::string> failures;
    bool operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
        return ok;
    }
};

std::string last_job_solution(const Json& job) {
    if (!job.is_object() || !job.contains("solutions") || job["solutions"].empty()) return {};
    return job["solutions"].back().get<std::string>();
}

// Every persisted file must parse.
void check_data_dir(const fs::path& dir, Checks& check) {
    std::size_t projects = 0;
    for (const auto& e : fs::directory_iterator(dir / "projects")) {
        if (e.path().extension() != ".json") continue;
        ++projects;
        try {
            parse_project(read_file(e.path()));
        } catch (const std::exception& ex) {
            check(false, e.path().filename().string() + " does not parse: " + ex.what());
        }
    }
    check(projects > 0, "no project files persisted");
    for (const auto& e : fs::directory_iterator(dir / "weather")) {
        if (e.path().extension() != ".epw") continue;
        try {
            parse_epw(read_file(e.path()));
        } catch (const std::exception& ex) {
            check(false, e.path().filename().string() + " does not parse: " + ex.what());
        }
    }
}

struct Child {
    pid_t pid = -1;
    int port = -1;
};

Child spawn_server(const std::string& cli, const fs::path& dir) {
    int fds[2];
    if (pipe(fds) != 0) return {};
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_adddup2(&fa, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&fa, fds[0]);
    posix_spawn_file_actions_addclose(&fa, fds[1]);
    const std::string d = dir.string();
    std::vector<std::string> args = {cli, "--json", "serve", "--data-dir", d, "--listen", "127.0.0.1:0", "--workers", "1"};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    Child c;
    const int rc = posix_spawn(&c.pid, cli.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    close(fds[1]);
    if (rc != 0) {
        close(fds[0]);
        return {};
    }
    std::string line;
    char ch;
    while (read(fds[0], &ch, 1) == 1 && ch != '\n') line.push_back(ch);
    close(fds[0]);
    try {
        c.port = Json::parse(line).at("port").get<int>();
    } catch (const std::exception&) {
        c.port = -1;
    }
    return c;
}

}  // namespace

Json Reply::json() const {
    try {
        return Json::parse(body);
    } catch (const std::exception&) {
        return nullptr;
    }
}

Client::Client(int port, std::string host) : host_(std::move(host)), port_(port) {}

Reply Client::get(const std::string& path) const {
    httplib::Client c(host_, port_);
    c.set_read_timeout(120, 0);
    return to_reply(c.Get(path));
}

Reply Client::post(const std::string& path, const std::string& body, const std::string& type) const {
    httplib::Client c(host_, port_);
    c.set_read_timeout(120, 0);
    return to_reply(c.Post(path, body, type));
}

Reply Client::put(const std::string& path, const std::string& body) const {
    httplib::Client c(host_, port_);
    c.set_read_timeout(120, 0);
    return to_reply(c.Put(path, body, "application/json"));
}

RunningServer::RunningServer(const fs::path& data_dir) {
    ServiceConfig cfg;
    cfg.data_dir = data_dir;
    cfg.host = "127.0.0.1";
    cfg.port = 0;
    service_ = std::make_unique<Service>(cfg);
    http_ = std::make_unique<HttpServer>(*service_);
    port_ = http_->bind(cfg.host, 0);
    thread_ = std::thread([this] { http_->listen(); });
    // listen_after_bind starts accepting immediately; wait until it answers.
    const Client c(port_);
    for (int i = 0; i < 200 && c.get("/api/v1/projects").status == 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

RunningServer::~RunningServer() {
    http_->stop();
    if (thread_.joinable()) thread_.join();
    service_->wait_idle();
}

Json wait_job(const Client& c, const std::string& job_id, double timeout_s) {
    const auto end = Clock::now() + std::chrono::duration<double>(timeout_s);
    while (Clock::now() < end) {
        const Reply r = c.get("/api/v1/jobs/" + job_id);
        const Json j = r.json();
        if (r.status == 200 && j.is_object()) {
            const std::string s = j.value("state", "");
            if (s == "done" || s == "failed") return j;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    return nullptr;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("planforge-" + name + "-" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::vector<std::string> lifecycle(const fs::path& data_dir, const std::string& fixture_dir) {
    Checks check;
    RunningServer server(data_dir);
    if (!check(server.port() > 0, "server did not bind")) return check.failures;
    const Client c(server.port());

    const Reply created = c.post("/api/v1/projects", fixture(fixture_dir, "toy3_project.json"));
    if (!check(created.status == 201, "create project returned " + std::to_string(created.status) + " " + created.body)) {
        return check.failures;
    }
    const std::string pid = created.json().value("id", "");

    const std::string epw = format_epw(synthetic_weather(Location{}));
    const Reply w1 = c.post("/api/v1/weather", epw, "text/plain");
    const Reply w2 = c.post("/api/v1/weather", epw, "text/plain");
    check(w1.status == 201, "first weather upload returned " + std::to_string(w1.status));
    check(w2.status == 200, "repeated weather upload returned " + std::to_string(w2.status));
    const std::string wid = w1.json().value("id", "");
    check(!wid.empty() && w2.json().value("id", "") == wid, "weather id is not content-stable");

    const Reply gen = c.post("/api/v1/projects/" + pid + "/generate", R"({"count":2,"seed":3,"max_evaluations":3000})");
    if (!check(gen.status == 202, "generate returned " + std::to_string(gen.status) + " " + gen.body)) return check.failures;
    const Json gjob = wait_job(c, gen.json().value("job", ""));
    if (!check(gjob.is_object() && gjob.value("state", "") == "done", "generation job did not finish")) return check.failures;
    check(gjob["solutions"].size() == 2, "generation did not yield 2 solutions");
    const Reply listed = c.get("/api/v1/projects/" + pid + "/solutions");
    check(listed.status == 200 && listed.json().size() == 2, "solution list does not hold 2 entries");
    const std::string sid = gjob["solutions"][0].get<std::string>();

    const Reply as = c.post("/api/v1/solutions/" + sid + "/assess", Json{{"weather", wid}}.dump());
    check(as.status == 200, "assess returned " + std::to_string(as.status) + " " + as.body);
    const Json aj = as.json();
    check(aj.is_object() && aj.contains("objective") && aj["objective"].is_number(), "assess reply carries no objective");

    const Json strategy = {{"order", {"overhang_depth"}}, {"steps_per_variable", 3}, {"max_passes", 1}};
    const Reply op = c.post("/api/v1/solutions/" + sid + "/optimize", strategy.dump());
    check(op.status == 202, "optimize returned " + std::to_string(op.status) + " " + op.body);
    const Json ojob = wait_job(c, op.json().value("job", ""));
    check(ojob.is_object() && ojob.value("state", "") == "done", "optimization job did not finish");
    const std::string opt_sid = last_job_solution(ojob);
    if (check(!opt_sid.empty(), "optimization produced no solution")) {
        const Json sj = c.get("/api/v1/solutions/" + opt_sid).json();
        check(sj.is_object() && sj.contains("trace"), "optimized solution has no trace");
    }

    for (const std::string fmt : {"dxf2d", "dxf3d", "svg", "csv", "json"}) {
        const Reply r = c.get("/api/v1/solutions/" + sid + "/export?format=" + fmt + "&storey=0");
        if (!check(r.status == 200, fmt + " export returned " + std::to_string(r.status))) continue;
        if (fmt.rfind("dxf", 0) == 0) {
            check(r.body.size() >= 6 && r.body.compare(r.body.size() - 6, 6, "0\nEOF\n") == 0, fmt + " does not end with EOF");
        } else if (fmt == "svg") {
            check(r.body.find("<svg") != std::string::npos, "svg export has no svg element");
        } else if (fmt == "csv") {
            std::size_t lines = 0;
            for (char ch : r.body) lines += ch == '\n';
            check(lines == kHoursPerYear + 1, "csv export has " + std::to_string(lines) + " lines");
        } else {
            try {
                const Project p = parse_project(r.body);
                check(p.solutions.size() == 1, "json export does not hold the solution");
            } catch (const std::exception& e) {
                check(false, std::string("json export does not parse: ") + e.what());
            }
        }
    }
    server.service().wait_idle();
    check_data_dir(data_dir, check);
    return check.failures;
}

std::vector<std::string> kill_restart(const fs::path& data_dir, const std::string& fixture_dir, const std::string& cli_path) {
    Checks check;
    const Child child = spawn_server(cli_path, data_dir);
    if (!check(child.pid > 0 && child.port > 0, "server process did not start")) {
        if (child.pid > 0) {
            kill(child.pid, SIGKILL);
            waitpid(child.pid, nullptr, 0);
        }
        return check.failures;
    }
    const Client c(child.port);
    std::string pid;
    const Reply created = c.post("/api/v1/projects", fixture(fixture_dir, "toy3_project.json"));
    if (check(created.status == 201, "create project returned " + std::to_string(created.status))) {
        pid = created.json().value("id", "");
        check(c.post("/api/v1/weather", format_epw(synthetic_weather(Location{})), "text/plain").status == 201,
              "weather upload failed");
        const Reply g1 = c.post("/api/v1/projects/" + pid + "/generate", R"({"count":1,"seed":1,"max_evaluations":500})");
        const Json j1 = wait_job(c, g1.json().value("job", ""));
        check(j1.is_object() && j1.value("state", "") == "done", "short generation did not finish");

        const Reply g2 = c.post("/api/v1/projects/" + pid + "/generate", R"({"count":4,"seed":9,"max_evaluations":50000000})");
        const std::string jid = g2.json().value("job", "");
        bool running = false;
        const auto end = Clock::now() + std::chrono::seconds(30);
        while (!running && Clock::now() < end) {
            const Json j = c.get("/api/v1/jobs/" + jid).json();
            running = j.is_object() && j.value("state", "") == "running" && j.value("progress", 0.0) > 0.0;
            if (!running) std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        check(running, "long generation never started running");
    }
    kill(child.pid, SIGKILL);
    waitpid(child.pid, nullptr, 0);

    check_data_dir(data_dir, check);
    try {
        ServiceConfig cfg;
        cfg.data_dir = data_dir;
        Service again(cfg);
        const HttpResponse r = again.handle("GET", "/api/v1/projects/" + pid, {}, "");
        check(r.status == 200, "project missing after restart");
        const Project p = project_from_json(Json::parse(r.body));
        check(p.solutions.size() == 1, "restart sees " + std::to_string(p.solutions.size()) + " solutions, expected 1");
        for (const auto& e : fs::recursive_directory_iterator(data_dir)) {
            check(e.path().extension() != ".tmp", "temporary file left after restart: " + e.path().string());
        }
    } catch (const std::exception& e) {
        check(false, std::string("restart failed: ") + e.what());
    }
    return check.failures;
}

}  // namespace harness
