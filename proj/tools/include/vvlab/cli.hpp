#pragma once

#include <filesystem>
#include <string>

#include "vvlab/limitlab.hpp"

namespace vvlab::cli {

/// Bookkeeping for one sweep invocation, persisted as manifest.json in the output
/// directory. A completed manifest is never overwritten unless forced.
struct RunManifest {
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    int parallelism = 1;
    int verbosity = 0;
};

/// Parses the flat key = value experiment config; arrays are comma-separated.
/// Required keys: gamma, rho_plus, u_plus, epsilons, h, t_end.
/// Optional keys (with defaults): c_mu = 1, cells_per_delta = 50, order = 2,
/// cfl = 0.45, sample_times (8 equally spaced times in [h, t_end]).
/// Errors name the offending key and the violated constraint.
limitlab::SweepConfig parse_config(const std::string& text);

/// Entry point behind main(); returns the process exit code
/// (0 success, 1 runtime/config error, 2 usage error).
int run_cli(int argc, const char* const* argv);

}  // namespace vvlab::cli
