#include "vvlab/nssolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vvlab::nssolver {

namespace {

double kahan_sum(const std::vector<double>& v, double scale) {
    double sum = 0.0;
    double carry = 0.0;
    for (const double x : v) {
        const double y = x * scale - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) {
        return std::min(a, b);
    }
    if (a < 0.0 && b < 0.0) {
        return std::max(a, b);
    }
    return 0.0;
}

struct Extrema {
    double min_rho;
    double max_speed;  // max |u| + c
};

Extrema state_extrema(const std::vector<double>& rho, const std::vector<double>& m,
                      const gasdyn::GasModel& gas) {
    Extrema e{std::numeric_limits<double>::infinity(), 0.0};
    const double half_gm1 = 0.5 * (gas.gamma() - 1.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        e.min_rho = std::min(e.min_rho, rho[i]);
        if (rho[i] > 0.0) {
            const double speed = std::abs(m[i] / rho[i]) + std::pow(rho[i], half_gm1);
            e.max_speed = std::max(e.max_speed, speed);
        }
    }
    return e;
}

struct Rhs {
    std::vector<double> drho;
    std::vector<double> dm;
    double mass_flux_left = 0.0;
    double mass_flux_right = 0.0;
};

// Rusanov flux with optional minmod MUSCL reconstruction and explicit eps*u_xx on the
// momentum; ghost cells hold the approximate wave at the stage time.
void eval_rhs(const std::vector<double>& rho, const std::vector<double>& m, const Grid& g,
              const SolverConfig& cfg, const smoothwave::ApproxWave& aw, double t, Rhs& out) {
    const int n = g.n_cells;
    const gasdyn::GasModel& gas = aw.cutoff.base.gas;
    const double gamma = gas.gamma();
    const double dx = g.dx;

    std::vector<double> r(n + 4);
    std::vector<double> q(n + 4);
    std::copy(rho.begin(), rho.end(), r.begin() + 2);
    std::copy(m.begin(), m.end(), q.begin() + 2);
    const double ghost_x[4] = {g.x_left - 1.5 * dx, g.x_left - 0.5 * dx,
                               g.x_right + 0.5 * dx, g.x_right + 1.5 * dx};
    const int ghost_i[4] = {0, 1, n + 2, n + 3};
    for (int k = 0; k < 4; ++k) {
        const smoothwave::ApproxPoint ap = smoothwave::eval_approx_wave(aw, ghost_x[k], t);
        r[ghost_i[k]] = ap.rho;
        q[ghost_i[k]] = ap.rho * ap.u;
    }

    std::vector<double> u(n + 4);
    for (int i = 0; i < n + 4; ++i) {
        u[i] = q[i] / r[i];
    }

    std::vector<double> sr(n + 4, 0.0);
    std::vector<double> sq(n + 4, 0.0);
    if (cfg.order == 2) {
        for (int i = 1; i <= n + 2; ++i) {
            sr[i] = minmod(r[i] - r[i - 1], r[i + 1] - r[i]);
            sq[i] = minmod(q[i] - q[i - 1], q[i + 1] - q[i]);
        }
    }

    // Interface k separates extended cells k+1 | k+2, for k = 0..n.
    std::vector<double> fm(n + 1);
    std::vector<double> fq(n + 1);
    for (int k = 0; k <= n; ++k) {
        double rl = r[k + 1] + 0.5 * sr[k + 1];
        double ml = q[k + 1] + 0.5 * sq[k + 1];
        double rr = r[k + 2] - 0.5 * sr[k + 2];
        double mr = q[k + 2] - 0.5 * sq[k + 2];
        if (!(rl > 0.0) || !(rr > 0.0)) {
            rl = r[k + 1];
            ml = q[k + 1];
            rr = r[k + 2];
            mr = q[k + 2];
        }
        const double ul = ml / rl;
        const double pdl = std::pow(rl, gamma - 1.0);
        const double pl = rl * pdl / gamma;
        const double cl = std::sqrt(pdl);
        const double ur = mr / rr;
        const double pdr = std::pow(rr, gamma - 1.0);
        const double pr = rr * pdr / gamma;
        const double cr = std::sqrt(pdr);
        const double smax = std::max(std::abs(ul) + cl, std::abs(ur) + cr);
        fm[k] = 0.5 * (ml + mr) - 0.5 * smax * (rr - rl);
        fq[k] = 0.5 * (ml * ul + pl + mr * ur + pr) - 0.5 * smax * (mr - ml);
    }

    out.drho.resize(n);
    out.dm.resize(n);
    const double inv_dx = 1.0 / dx;
    const double visc = cfg.epsilon / (dx * dx);
    for (int i = 0; i < n; ++i) {
        out.drho[i] = -(fm[i + 1] - fm[i]) * inv_dx;
        out.dm[i] = -(fq[i + 1] - fq[i]) * inv_dx +
                    visc * (u[i + 3] - 2.0 * u[i + 2] + u[i + 1]);
    }
    out.mass_flux_left = fm[0];
    out.mass_flux_right = fm[n];
}

void check_positive(const std::vector<double>& rho, double t) {
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(rho[i] > 0.0)) {
            throw vacuum_breach_error(static_cast<int>(i), t);
        }
    }
}

// Core update with a prescribed dt; callers choose dt via next_dt / landing caps.
FieldState step_with_dt(const FieldState& s, const Grid& g, const SolverConfig& cfg,
                        const smoothwave::ApproxWave& aw, double dt, Rhs& k1, Rhs& k2) {
    const int n = g.n_cells;
    FieldState out = s;
    out.t = s.t + dt;
    eval_rhs(s.rho, s.m, g, cfg, aw, s.t, k1);
    if (cfg.order == 1) {
        for (int i = 0; i < n; ++i) {
            out.rho[i] = s.rho[i] + dt * k1.drho[i];
            out.m[i] = s.m[i] + dt * k1.dm[i];
        }
        check_positive(out.rho, out.t);
        out.boundary_mass_in += dt * (k1.mass_flux_left - k1.mass_flux_right);
    } else {
        std::vector<double> r1(n);
        std::vector<double> m1(n);
        for (int i = 0; i < n; ++i) {
            r1[i] = s.rho[i] + dt * k1.drho[i];
            m1[i] = s.m[i] + dt * k1.dm[i];
        }
        check_positive(r1, out.t);
        eval_rhs(r1, m1, g, cfg, aw, s.t + dt, k2);
        for (int i = 0; i < n; ++i) {
            out.rho[i] = s.rho[i] + 0.5 * dt * (k1.drho[i] + k2.drho[i]);
            out.m[i] = s.m[i] + 0.5 * dt * (k1.dm[i] + k2.dm[i]);
        }
        check_positive(out.rho, out.t);
        out.boundary_mass_in += 0.5 * dt *
                                ((k1.mass_flux_left - k1.mass_flux_right) +
                                 (k2.mass_flux_left - k2.mass_flux_right));
    }
    const Extrema e = state_extrema(out.rho, out.m, aw.cutoff.base.gas);
    out.min_rho_seen = std::min(s.min_rho_seen, e.min_rho);
    out.max_speed_seen = std::max(s.max_speed_seen, e.max_speed);
    return out;
}

double stiffness_floor(double t) { return 1e-14 * std::max(1.0, std::abs(t)); }

}  // namespace

Grid make_grid(double x_left, double x_right, int n_cells) {
    if (!(x_left < x_right)) {
        throw std::invalid_argument("make_grid: requires x_left < x_right");
    }
    if (n_cells < 16) {
        throw std::invalid_argument("make_grid: requires n_cells >= 16");
    }
    return {x_left, x_right, n_cells, (x_right - x_left) / n_cells};
}

void validate(const SolverConfig& config) {
    if (!(config.epsilon > 0.0)) {
        throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    }
    if (!(config.cfl > 0.0) || !(config.cfl <= 0.9)) {
        throw std::invalid_argument("SolverConfig: cfl must lie in (0, 0.9]");
    }
    if (config.order != 1 && config.order != 2) {
        throw std::invalid_argument("SolverConfig: order must be 1 or 2");
    }
}

vacuum_breach_error::vacuum_breach_error(int cell, double time)
    : std::runtime_error("density non-positive in cell " + std::to_string(cell) + " at t = " +
                         std::to_string(time)),
      cell_(cell),
      time_(time) {}

stiffness_error::stiffness_error(double dt)
    : std::runtime_error("time step underflow: dt = " + std::to_string(dt)), dt_(dt) {}

FieldState init_from_wave(const smoothwave::ApproxWave& aw, const Grid& grid) {
    const double span = 60.0 * aw.profile.delta;
    if (!(grid.x_left <= -span) || !(grid.x_right >= span)) {
        throw std::invalid_argument(
            "init_from_wave: grid must cover the smoothed transition ([-60 delta, 60 delta])");
    }
    FieldState s;
    s.rho.resize(grid.n_cells);
    s.m.resize(grid.n_cells);
    s.t = 0.0;
    // 3-point Gauss cell averages of (rho_bar, rho_bar u_bar)(., 0).
    const double node = std::sqrt(0.6);
    const double nodes[3] = {-node, 0.0, node};
    const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double hint = grid.x_left;
    for (int i = 0; i < grid.n_cells; ++i) {
        const double xc = grid.center(i);
        double ra = 0.0;
        double ma = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double x = xc + 0.5 * grid.dx * nodes[k];
            const smoothwave::ApproxPoint ap = smoothwave::eval_approx_wave(aw, x, 0.0, hint);
            ra += weights[k] * ap.rho;
            ma += weights[k] * ap.rho * ap.u;
        }
        s.rho[i] = ra;
        s.m[i] = ma;
    }
    const Extrema e = state_extrema(s.rho, s.m, aw.cutoff.base.gas);
    s.min_rho_seen = e.min_rho;
    s.max_speed_seen = e.max_speed;
    return s;
}

double next_dt(const FieldState& state, const Grid& grid, const SolverConfig& config,
               const gasdyn::GasModel& gas) {
    validate(config);
    const Extrema e = state_extrema(state.rho, state.m, gas);
    if (!(e.min_rho > 0.0)) {
        throw vacuum_breach_error(0, state.t);
    }
    const double dt_hyp = grid.dx / e.max_speed;
    const double dt_visc = grid.dx * grid.dx * e.min_rho / (2.0 * config.epsilon);
    return config.cfl * std::min(dt_hyp, dt_visc);
}

FieldState step(const FieldState& state, const Grid& grid, const SolverConfig& config,
                const smoothwave::ApproxWave& aw, double dt_cap) {
    validate(config);
    if (static_cast<int>(state.rho.size()) != grid.n_cells ||
        static_cast<int>(state.m.size()) != grid.n_cells) {
        throw std::invalid_argument("step: state arrays do not match the grid");
    }
    check_positive(state.rho, state.t);
    double dt = next_dt(state, grid, config, aw.cutoff.base.gas);
    if (dt < stiffness_floor(state.t)) {
        throw stiffness_error(dt);
    }
    dt = std::min(dt, dt_cap);
    Rhs k1;
    Rhs k2;
    return step_with_dt(state, grid, config, aw, dt, k1, k2);
}

FieldState advance_to(FieldState state, const Grid& grid, const SolverConfig& config,
                      const smoothwave::ApproxWave& aw, double t_target,
                      const StepObserver& observer) {
    validate(config);
    if (!(t_target >= state.t)) {
        throw std::invalid_argument("advance_to: t_target must be >= state.t");
    }
    Rhs k1;
    Rhs k2;
    while (state.t < t_target) {
        check_positive(state.rho, state.t);
        const double dt0 = next_dt(state, grid, config, aw.cutoff.base.gas);
        if (dt0 < stiffness_floor(state.t)) {
            throw stiffness_error(dt0);
        }
        const double remaining = t_target - state.t;
        if (dt0 >= remaining) {
            state = step_with_dt(state, grid, config, aw, remaining, k1, k2);
            state.t = t_target;  // land exactly
        } else {
            state = step_with_dt(state, grid, config, aw, dt0, k1, k2);
        }
        if (observer) {
            observer(state);
        }
    }
    return state;
}

FieldState advance_to(FieldState state, const Grid& grid, const SolverConfig& config,
                      const smoothwave::ApproxWave& aw) {
    return advance_to(std::move(state), grid, config, aw, config.t_end);
}

double mass_total(const FieldState& state, const Grid& grid) {
    return kahan_sum(state.rho, grid.dx);
}

}  // namespace vvlab::nssolver
