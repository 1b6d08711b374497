#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace planforge {

struct ServiceConfig {
    std::filesystem::path data_dir = "planforge-data";
    std::string host = "127.0.0.1";
    int port = 8080;
    int workers = 2;
    // Assessments of buildings with more spaces than this run as jobs.
    std::size_t assess_job_threshold = 12;
    std::filesystem::path static_dir;  // webui bundle served at /; empty serves a placeholder page

    // PLANFORGE_DATA_DIR, PLANFORGE_LISTEN (host:port), PLANFORGE_WORKERS, PLANFORGE_ASSESS_JOB_THRESHOLD,
    // PLANFORGE_STATIC_DIR override the defaults.
    static ServiceConfig from_env();
};

enum class JobKind : unsigned char { Generate, Assess, Optimize };
enum class JobState : unsigned char { Queued, Running, Done, Failed };
std::string_view job_kind_name(JobKind k);
std::string_view job_state_name(JobState s);
bool legal_transition(JobState from, JobState to);

struct JobInfo {
    std::string id;
    std::string project_id;
    JobKind kind = JobKind::Generate;
    JobState state = JobState::Queued;
    double progress = 0.0;
    std::vector<std::string> solutions;
    std::string error;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::string filename;  // sent as an attachment when set
};

// Transport-independent request handling; thread-safe.
class Service {
public:
    explicit Service(ServiceConfig cfg);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const std::string& method, const std::string& path,
                        const std::map<std::string, std::string>& query, const std::string& body);

    std::optional<JobInfo> job(const std::string& id) const;
    // Blocks until no job is queued or running.
    void wait_idle();
    const ServiceConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Serves a Service over HTTP until stop() is called.
class HttpServer {
public:
    explicit HttpServer(Service& s);
    ~HttpServer();

    // Binds host:port (port 0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    // Blocks serving requests.
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace planforge
