#pragma once

#include "sevo/config.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sevo {

/// One runnable experiment: a subcommand plus its resolved config.
/// Rerunning an identical manifest reproduces artifacts byte-for-byte.
struct Manifest {
    std::string id;
    std::string subcommand;
    Config config;
    std::filesystem::path out_dir = "out";
    int threads = 1;
    double rel_tol = 0.0;  // 0 keeps each command's default
};

struct CommandResult {
    int exit_code = 0;  // 0 ok, 1 operational error, 2 declared-expectation mismatch
    std::vector<std::pair<std::string, std::string>> summary;
    std::filesystem::path artifact_dir;
};

/// Dispatches to the subcommand, writes artifacts plus a resolved
/// config copy under out_dir/id, and returns the exit contract.
CommandResult run_manifest(const Manifest& m);

const std::vector<std::string>& known_subcommands();

}  // namespace sevo
