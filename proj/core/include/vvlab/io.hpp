#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vvlab/gasdyn.hpp"
#include "vvlab/limitlab.hpp"
#include "vvlab/nssolver.hpp"

namespace vvlab::io {

/// Shortest-faithful decimal form with 17 significant digits (round-trips exactly).
std::string format_g17(double value);

/// Columns: x, rho, m, u.
void write_state_csv(const std::filesystem::path& path, const nssolver::Grid& grid,
                     const nssolver::FieldState& state);

/// Columns: x, rho_eps, rho_exact, m_eps, m_exact (exact fan evaluated at x/t).
void write_profile_csv(const std::filesystem::path& path, const nssolver::Grid& grid,
                       const nssolver::FieldState& state, const gasdyn::ExactWave& wave);

/// Columns: epsilon, mu, delta, err_rho_inf, err_m_inf, ratio_rho, ratio_m,
/// energy_peak, dissipation_total, runtime_s; preceded by a `# gamma=...` comment line.
void write_sweep_csv(const std::filesystem::path& path, double gamma,
                     std::span<const limitlab::SweepRecord> records);

struct SweepCsv {
    double gamma = 0.0;  // from the preamble comment; 0 when absent
    std::vector<limitlab::SweepRecord> records;
};

SweepCsv read_sweep_csv(const std::filesystem::path& path);

}  // namespace vvlab::io
