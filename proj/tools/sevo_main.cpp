#include "sevo/manifest.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"sevo: numerical laboratory for structurally damped sigma-evolution equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string id;
    int threads = 1;
    double tol = 0.0;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "artifact output directory");
    app.add_option("--id", id, "experiment id (default: config file stem)");
    app.add_option("--threads", threads, "worker threads for scans and mode fan-out");
    app.add_option("--tol", tol, "override the integrator relative tolerance");

    for (const auto& name : sevo::known_subcommands()) app.add_subcommand(name, "");

    CLI11_PARSE(app, argc, argv);

    sevo::Manifest m;
    m.subcommand = app.get_subcommands().front()->get_name();
    m.out_dir = out_dir;
    m.threads = threads;
    m.rel_tol = tol;
    try {
        m.config = sevo::Config::parse_file(config_path);
        m.id = !id.empty() ? id
                           : m.config.has("run.id")
                                 ? m.config.str("run.id")
                                 : std::filesystem::path(config_path).stem().string();
        const sevo::CommandResult r = sevo::run_manifest(m);
        std::cout << m.subcommand << " " << m.id;
        for (const auto& [k, v] : r.summary) std::cout << "  " << k << "=" << v;
        std::cout << "\n  artifacts: " << r.artifact_dir.string() << "\n";
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
