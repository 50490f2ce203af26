#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "durasim/history.hpp"
#include "durasim/simulation.hpp"
#include "durasim/wbs.hpp"

namespace httplib {
class Server;
}

namespace durasim::service {

struct ServiceConfig {
    /// Simulations above this many iterations are refused with 400.
    std::size_t max_iterations = 100'000;
    /// JSON Lines store backing /history; in-memory only when unset.
    std::optional<std::filesystem::path> history_path;
    /// Canonical project files are mirrored here as <id>.json when set.
    std::optional<std::filesystem::path> project_dir;
    unsigned threads = 1;
};

/// Case-insensitive keys are lowercased by the transport adapter.
struct Request {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

/// Uploaded project plus its optimistic-concurrency version and latest run.
struct Scenario {
    Project project;
    std::uint64_t version = 1;
    std::shared_ptr<const SimulationResult> last_result;
};

/// HTTP facade over the engine. Endpoints:
///   PUT  /projects/{id}            upload (If-Match: <version> for updates)
///   GET  /projects/{id}            canonical project, ETag = version
///   POST /projects/{id}/simulate   {iterations?, seed?, min_history_points?, emit_samples?}
///   GET  /projects/{id}/report     risk report of the latest run (?format=csv)
///   POST /projects/{id}/freeze     {item_id, actual, version?}
///   POST /projects/{id}/whatif     {overrides?, before?, seed?, iterations?, min_history_points?}
///   GET  /history                  records (?key=, ?include_atypical=)
///   POST /history                  append one record
///   POST /history/import           CSV body
///   GET  /history/fit              ?key=&families=&include_atypical=
/// Errors: 400 validation, 404 unknown project/item/route, 409 stale version.
class Service {
public:
    explicit Service(ServiceConfig config = {});

    Response handle(const Request& request);

    /// Routes every method and path of `server` to handle().
    void mount(httplib::Server& server);

private:
    Response put_project(const std::string& id, const Request& req);
    Response get_project(const std::string& id);
    Response simulate(const std::string& id, const Request& req);
    Response report(const std::string& id, const Request& req);
    Response freeze_item(const std::string& id, const Request& req);
    Response whatif(const std::string& id, const Request& req);
    Response list_history(const Request& req);
    Response add_history(const Request& req);
    Response import_history(const Request& req);
    Response fit_history(const Request& req);

    Scenario snapshot(const std::string& id) const;
    HistoryStore history_snapshot() const;
    void persist(const std::string& id, const Project& project) const;

    ServiceConfig config_;
    mutable std::mutex projects_mutex_;
    std::map<std::string, Scenario> projects_;
    mutable std::mutex history_mutex_;
    HistoryStore history_;
};

}  // namespace durasim::service
