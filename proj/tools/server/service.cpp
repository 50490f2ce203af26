#include "service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "durasim/error.hpp"
#include "durasim/export.hpp"
#include "durasim/fitting.hpp"
#include "durasim/project_io.hpp"

namespace durasim::service {

namespace {

using Json = nlohmann::json;

Response json_response(int status, std::string body) {
    Response r;
    r.status = status;
    r.body = std::move(body);
    return r;
}

Response error_response(int status, const std::string& message) {
    Json j;
    j["error"] = message;
    return json_response(status, j.dump(2) + "\n");
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '/')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

bool valid_id(const std::string& id) {
    return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    }) && id != "." && id != "..";
}

Json parse_body(const Request& req) {
    if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
    try {
        Json j = Json::parse(req.body);
        if (!j.is_object()) throw ParseError("request body must be a JSON object");
        return j;
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("request body is not valid JSON: ") + e.what());
    }
}

/// Strict accessor for small request bodies.
class Body {
public:
    Body(Json j, std::initializer_list<const char*> allowed) : j_(std::move(j)) {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }) ==
                allowed.end()) {
                throw ParseError("unknown field '" + it.key() + "' in request body");
            }
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const Json& raw(const char* key) const { return j_.at(key); }

    std::uint64_t unsigned_or(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_number_unsigned()) throw ParseError("field '" + std::string(key) + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    double number(const char* key) const {
        if (!has(key)) throw ParseError("missing required field '" + std::string(key) + "'");
        const Json& v = j_.at(key);
        if (!v.is_number()) throw ParseError("field '" + std::string(key) + "' must be a number");
        return v.get<double>();
    }

    std::string string(const char* key) const {
        if (!has(key)) throw ParseError("missing required field '" + std::string(key) + "'");
        const Json& v = j_.at(key);
        if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a string");
        return v.get<std::string>();
    }

    bool flag_or(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_boolean()) throw ParseError("field '" + std::string(key) + "' must be true or false");
        return v.get<bool>();
    }

private:
    Json j_;
};

bool query_flag(const Request& req, const char* key) {
    const auto it = req.query.find(key);
    if (it == req.query.end()) return false;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}

std::optional<std::uint64_t> parse_version(const std::string& text) {
    std::string t = text;
    t.erase(std::remove(t.begin(), t.end(), '"'), t.end());
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError("version must be a non-negative integer, got '" + text + "'");
    }
    return std::stoull(t);
}

std::optional<std::uint64_t> expected_version(const Request& req, const Body* body) {
    if (const auto it = req.headers.find("if-match"); it != req.headers.end()) return parse_version(it->second);
    if (body && body->has("version")) return body->unsigned_or("version", 0);
    return std::nullopt;
}

void with_etag(Response& r, std::uint64_t version) {
    r.headers["ETag"] = "\"" + std::to_string(version) + "\"";
}

std::vector<Family> families_from(const std::string& list) {
    std::vector<Family> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto f = parse_family(name);
        if (!f) throw ValidationError("unknown distribution family '" + name + "'");
        out.push_back(*f);
    }
    return out;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    if (config_.history_path) history_ = load_history(*config_.history_path);
    if (config_.project_dir && std::filesystem::is_directory(*config_.project_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(*config_.project_dir)) {
            if (entry.path().extension() != ".json") continue;
            const std::string id = entry.path().stem().string();
            if (!valid_id(id)) continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            projects_[id] = Scenario{parse_project(buf.str()), 1, nullptr};
        }
    }
}

Response Service::handle(const Request& req) {
    try {
        const std::vector<std::string> parts = split_path(req.path);
        const std::string& m = req.method;
        if (!parts.empty() && parts[0] == "projects" && parts.size() >= 2) {
            const std::string& id = parts[1];
            if (!valid_id(id)) return error_response(400, "invalid project id '" + id + "'");
            if (parts.size() == 2) {
                if (m == "PUT") return put_project(id, req);
                if (m == "GET") return get_project(id);
            } else if (parts.size() == 3) {
                const std::string& action = parts[2];
                if (action == "simulate" && m == "POST") return simulate(id, req);
                if (action == "report" && m == "GET") return report(id, req);
                if (action == "freeze" && m == "POST") return freeze_item(id, req);
                if (action == "whatif" && m == "POST") return whatif(id, req);
            }
            return error_response(404, "no route for " + m + " " + req.path);
        }
        if (!parts.empty() && parts[0] == "history") {
            if (parts.size() == 1 && m == "GET") return list_history(req);
            if (parts.size() == 1 && m == "POST") return add_history(req);
            if (parts.size() == 2 && parts[1] == "import" && m == "POST") return import_history(req);
            if (parts.size() == 2 && parts[1] == "fit" && m == "GET") return fit_history(req);
        }
        return error_response(404, "no route for " + m + " " + req.path);
    } catch (const NotFoundError& e) {
        return error_response(404, e.what());
    } catch (const ConflictError& e) {
        return error_response(409, e.what());
    } catch (const Error& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

Scenario Service::snapshot(const std::string& id) const {
    std::lock_guard lock(projects_mutex_);
    const auto it = projects_.find(id);
    if (it == projects_.end()) throw NotFoundError("unknown project '" + id + "'");
    return it->second;
}

HistoryStore Service::history_snapshot() const {
    std::lock_guard lock(history_mutex_);
    return history_;
}

void Service::persist(const std::string& id, const Project& project) const {
    if (!config_.project_dir) return;
    std::filesystem::create_directories(*config_.project_dir);
    std::ofstream out(*config_.project_dir / (id + ".json"), std::ios::binary | std::ios::trunc);
    out << serialize_project(project);
}

Response Service::put_project(const std::string& id, const Request& req) {
    Project project = parse_project(req.body);
    const auto expected = expected_version(req, nullptr);
    std::uint64_t version = 1;
    bool created = false;
    {
        std::lock_guard lock(projects_mutex_);
        auto it = projects_.find(id);
        if (it == projects_.end()) {
            if (expected && *expected != 0) {
                throw ConflictError("project '" + id + "' does not exist; expected version " +
                                    std::to_string(*expected));
            }
            projects_[id] = Scenario{project, 1, nullptr};
            created = true;
        } else {
            if (expected && *expected != it->second.version) {
                throw ConflictError("stale write to project '" + id + "': current version is " +
                                    std::to_string(it->second.version) + ", request expected " +
                                    std::to_string(*expected));
            }
            it->second = Scenario{project, it->second.version + 1, nullptr};
            version = it->second.version;
        }
        persist(id, project);
    }
    Json j;
    j["id"] = id;
    j["version"] = version;
    Response r = json_response(created ? 201 : 200, j.dump(2) + "\n");
    with_etag(r, version);
    return r;
}

Response Service::get_project(const std::string& id) {
    const Scenario s = snapshot(id);
    Response r = json_response(200, serialize_project(s.project));
    with_etag(r, s.version);
    return r;
}

Response Service::simulate(const std::string& id, const Request& req) {
    const Body body(parse_body(req), {"iterations", "seed", "min_history_points", "emit_samples"});
    SimulationConfig cfg;
    cfg.iterations = body.unsigned_or("iterations", cfg.iterations);
    cfg.seed = body.unsigned_or("seed", 1);
    cfg.min_history_points = body.unsigned_or("min_history_points", cfg.min_history_points);
    if (cfg.iterations > config_.max_iterations) {
        throw ValidationError("iterations " + std::to_string(cfg.iterations) + " exceed the server cap of " +
                              std::to_string(config_.max_iterations));
    }
    const Scenario s = snapshot(id);
    RunOptions options;
    options.threads = config_.threads;
    auto result = std::make_shared<const SimulationResult>(run(s.project, cfg, history_snapshot(), options));
    {
        std::lock_guard lock(projects_mutex_);
        auto it = projects_.find(id);
        if (it != projects_.end() && it->second.version == s.version) it->second.last_result = result;
    }
    Response r = json_response(200, result_to_json(*result, body.flag_or("emit_samples", false)));
    with_etag(r, s.version);
    return r;
}

Response Service::report(const std::string& id, const Request& req) {
    const Scenario s = snapshot(id);
    if (!s.last_result) throw NotFoundError("project '" + id + "' has no simulation result; POST simulate first");
    const RiskReport rep = risk_report(*s.last_result);
    const auto fmt = req.query.find("format");
    if (fmt != req.query.end() && fmt->second == "csv") {
        Response r = json_response(200, risk_report_to_csv(rep));
        r.content_type = "text/csv";
        return r;
    }
    return json_response(200, risk_report_to_json(rep));
}

Response Service::freeze_item(const std::string& id, const Request& req) {
    const Body body(parse_body(req), {"item_id", "actual", "version"});
    const std::string item = body.string("item_id");
    const double actual = body.number("actual");
    const auto expected = expected_version(req, &body);

    std::lock_guard lock(projects_mutex_);
    auto it = projects_.find(id);
    if (it == projects_.end()) throw NotFoundError("unknown project '" + id + "'");
    if (expected && *expected != it->second.version) {
        throw ConflictError("stale write to project '" + id + "': current version is " +
                            std::to_string(it->second.version) + ", request expected " + std::to_string(*expected));
    }
    Project frozen = freeze(it->second.project, item, actual);
    it->second = Scenario{std::move(frozen), it->second.version + 1, nullptr};
    persist(id, it->second.project);
    Response r = json_response(200, serialize_project(it->second.project));
    with_etag(r, it->second.version);
    return r;
}

Response Service::whatif(const std::string& id, const Request& req) {
    const Body body(parse_body(req), {"overrides", "before", "seed", "iterations", "min_history_points"});
    SimulationConfig cfg;
    cfg.iterations = body.unsigned_or("iterations", cfg.iterations);
    cfg.seed = body.unsigned_or("seed", 1);
    cfg.min_history_points = body.unsigned_or("min_history_points", cfg.min_history_points);
    if (cfg.iterations > config_.max_iterations) {
        throw ValidationError("iterations " + std::to_string(cfg.iterations) + " exceed the server cap of " +
                              std::to_string(config_.max_iterations));
    }
    const Overrides after = body.has("overrides") ? parse_overrides(body.raw("overrides").dump()) : Overrides{};
    const Overrides before = body.has("before") ? parse_overrides(body.raw("before").dump()) : Overrides{};

    const Scenario s = snapshot(id);
    const HistoryStore store = history_snapshot();
    RunOptions options;
    options.threads = config_.threads;
    const SimulationResult r0 = run(apply_overrides(s.project, before), cfg, store, options);
    const SimulationResult r1 = run(apply_overrides(s.project, after), cfg, store, options);
    return json_response(200, comparison_to_json(compare(r0, r1)));
}

Response Service::list_history(const Request& req) {
    const HistoryStore store = history_snapshot();
    const auto key = req.query.find("key");
    const bool include_atypical = query_flag(req, "include_atypical") || key == req.query.end();
    std::vector<HistoryRecord> rows;
    for (const HistoryRecord& r : store.records()) {
        if (key != req.query.end() && r.key != normalize_key(key->second)) continue;
        if (!include_atypical && !r.typical) continue;
        rows.push_back(r);
    }
    return json_response(200, history_to_json(rows));
}

Response Service::add_history(const Request& req) {
    const HistoryRecord record = parse_record(req.body);
    std::lock_guard lock(history_mutex_);
    if (config_.history_path) {
        history_ = update_history(*config_.history_path,
                                  [&](HistoryStore s) { return add_record(std::move(s), record); });
    } else {
        history_ = add_record(history_, record);
    }
    Json j;
    j["key"] = record.key;
    j["size"] = history_.size();
    return json_response(201, j.dump(2) + "\n");
}

Response Service::import_history(const Request& req) {
    std::lock_guard lock(history_mutex_);
    ImportReport report;
    const auto apply = [&](HistoryStore s) {
        ImportOutcome outcome = import_csv(std::move(s), req.body);
        report = outcome.report;
        return std::move(outcome.store);
    };
    history_ = config_.history_path ? update_history(*config_.history_path, apply) : apply(history_);
    return json_response(200, import_report_to_json(report));
}

Response Service::fit_history(const Request& req) {
    const auto key = req.query.find("key");
    if (key == req.query.end() || key->second.empty()) throw ValidationError("query parameter 'key' is required");
    const auto fam = req.query.find("families");
    std::vector<Family> families =
        fam == req.query.end() ? std::vector<Family>{} : families_from(fam->second);
    if (families.empty()) families.assign(kAllFamilies.begin(), kAllFamilies.end());

    const std::vector<double> values = history_snapshot().records_for(key->second, query_flag(req, "include_atypical"));
    if (values.size() < kMinFitPoints) {
        throw InsufficientDataError("key '" + normalize_key(key->second) + "' has " + std::to_string(values.size()) +
                                    " record(s); fitting needs at least " + std::to_string(kMinFitPoints));
    }
    return json_response(200, fits_to_json(best_fit(values, families)));
}

void Service::mount(httplib::Server& server) {
    const auto adapter = [this](const httplib::Request& in, httplib::Response& out) {
        Request req;
        req.method = in.method;
        req.path = in.path;
        req.body = in.body;
        for (const auto& [k, v] : in.params) req.query.emplace(k, v);
        for (const auto& [k, v] : in.headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
            req.headers.emplace(std::move(key), v);
        }
        const Response res = handle(req);
        out.status = res.status;
        for (const auto& [k, v] : res.headers) out.set_header(k, v);
        out.set_content(res.body, res.content_type);
    };
    server.Get(".*", adapter);
    server.Post(".*", adapter);
    server.Put(".*", adapter);
    server.Delete(".*", adapter);
}

}  // namespace durasim::service
