#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vvlab/smoothwave.hpp"

namespace vvlab::nssolver {

struct Grid {
    double x_left;
    double x_right;
    int n_cells;
    double dx;

    double center(int i) const { return x_left + (i + 0.5) * dx; }
};

/// Validates x_left < x_right and n_cells >= 16.
Grid make_grid(double x_left, double x_right, int n_cells);

/// Discrete conserved fields (rho, m) at cell centers plus run bookkeeping.
struct FieldState {
    std::vector<double> rho;
    std::vector<double> m;
    double t = 0.0;

    /// Time-integrated net mass flux entering through the two domain ends;
    /// mass_total(state) - mass_total(initial) equals this up to rounding.
    double boundary_mass_in = 0.0;

    // Run monitors, updated by init_from_wave() and step().
    double min_rho_seen = std::numeric_limits<double>::infinity();
    double max_speed_seen = 0.0;  // max over cells and steps of |u| + sound speed
};

struct SolverConfig {
    double epsilon = 1e-3;  // momentum diffusion coefficient
    double cfl = 0.45;      // must lie in (0, 0.9]
    int order = 2;          // 1: piecewise-constant + forward Euler, 2: minmod MUSCL + Heun
    double t_end = 0.0;     // default target for advance_to
};

void validate(const SolverConfig& config);

class vacuum_breach_error : public std::runtime_error {
public:
    vacuum_breach_error(int cell, double time);
    int cell() const { return cell_; }
    double time() const { return time_; }

private:
    int cell_;
    double time_;
};

class stiffness_error : public std::runtime_error {
public:
    explicit stiffness_error(double dt);
    double dt() const { return dt_; }

private:
    double dt_;
};

/// Cell averages of (rho_bar, rho_bar*u_bar)(., 0) by 3-point Gauss quadrature per cell.
/// Requires the grid to cover the smoothed transition: [-60 delta, 60 delta] inside the domain.
FieldState init_from_wave(const smoothwave::ApproxWave& aw, const Grid& grid);

/// Stable step size cfl * min(dx / max(|u| + c), dx^2 min(rho) / (2 eps)).
double next_dt(const FieldState& state, const Grid& grid, const SolverConfig& config,
               const gasdyn::GasModel& gas);

/// One explicit step: Rusanov flux (minmod MUSCL reconstruction at order 2), explicit
/// central-difference momentum diffusion eps * u_xx, and time-exact ghost cells from the
/// approximate wave. Heun two-stage time integration at order 2, forward Euler at order 1.
FieldState step(const FieldState& state, const Grid& grid, const SolverConfig& config,
                const smoothwave::ApproxWave& aw,
                double dt_cap = std::numeric_limits<double>::infinity());

using StepObserver = std::function<void(const FieldState&)>;

/// Repeated step() with the final partial step landing exactly on t_target.
/// Deterministic for fixed inputs; observer (if set) is invoked after every step.
FieldState advance_to(FieldState state, const Grid& grid, const SolverConfig& config,
                      const smoothwave::ApproxWave& aw, double t_target,
                      const StepObserver& observer = {});

FieldState advance_to(FieldState state, const Grid& grid, const SolverConfig& config,
                      const smoothwave::ApproxWave& aw);

/// Sum of rho * dx over all cells (compensated summation).
double mass_total(const FieldState& state, const Grid& grid);

}  // namespace vvlab::nssolver
