#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>

#include "service.hpp"

namespace {
httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"durasim-server: HTTP interface to the schedule simulator"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string history;
    std::string project_dir;
    durasim::service::ServiceConfig config;
    app.add_option("--host", host, "Bind address")->capture_default_str();
    app.add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535))->capture_default_str();
    app.add_option("--history", history, "History store (JSON Lines)");
    app.add_option("--project-dir", project_dir, "Directory mirroring uploaded projects");
    app.add_option("--max-iterations", config.max_iterations, "Per-request iteration cap")->capture_default_str();
    app.add_option("--threads", config.threads, "Worker threads per simulation")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    if (!history.empty()) config.history_path = history;
    if (!project_dir.empty()) config.project_dir = project_dir;

    try {
        durasim::service::Service service(config);
        httplib::Server server;
        service.mount(server);
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cerr << "listening on http://" << host << ":" << port << "\n";
        if (!server.listen(host, port)) {
            std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
