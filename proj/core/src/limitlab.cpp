#include "vvlab/limitlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vvlab::limitlab {

namespace {

class KahanSum {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace

std::vector<double> default_sample_times(double h, double t_end, int count) {
    if (count < 2 || !(h > 0.0) || !(h < t_end)) {
        throw std::invalid_argument("default_sample_times: requires 0 < h < t_end, count >= 2");
    }
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i) {
        ts[i] = h + (t_end - h) * i / (count - 1);
    }
    ts.back() = t_end;
    return ts;
}

void validate(const SweepConfig& c) {
    if (!(c.right.rho_plus > 0.0)) {
        throw std::invalid_argument("SweepConfig: rho_plus must be > 0");
    }
    if (c.epsilons.empty()) {
        throw std::invalid_argument("SweepConfig: epsilons must be nonempty");
    }
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
        if (!(c.epsilons[i] > 0.0) || !(c.epsilons[i] < 1.0)) {
            throw std::invalid_argument("SweepConfig: each epsilon must lie in (0, 1)");
        }
        if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1])) {
            throw std::invalid_argument("SweepConfig: epsilons must be strictly decreasing");
        }
    }
    if (!(c.h > 0.0) || !(c.h < c.t_end)) {
        throw std::invalid_argument("SweepConfig: requires 0 < h < t_end");
    }
    for (std::size_t i = 0; i < c.sample_times.size(); ++i) {
        if (!(c.sample_times[i] >= c.h) || !(c.sample_times[i] <= c.t_end)) {
            throw std::invalid_argument("SweepConfig: sample_times must lie in [h, t_end]");
        }
        if (i > 0 && !(c.sample_times[i] > c.sample_times[i - 1])) {
            throw std::invalid_argument("SweepConfig: sample_times must be strictly increasing");
        }
    }
    if (c.cells_per_delta < 4) {
        throw std::invalid_argument("SweepConfig: cells_per_delta must be >= 4");
    }
    nssolver::SolverConfig scfg;
    scfg.epsilon = c.epsilons.front();
    scfg.cfl = c.cfl;
    scfg.order = c.order;
    nssolver::validate(scfg);
    // Every schedule in the sweep must be feasible up front.
    for (const double eps : c.epsilons) {
        (void)smoothwave::make_schedule(c.gas, c.right.rho_plus, eps, c.c_mu);
    }
}

nssolver::Grid case_grid(const smoothwave::ApproxWave& aw, double delta, double t_end,
                         int cells_per_delta) {
    const double x_left = std::min(-60.0 * delta, aw.profile.w_minus * t_end - 20.0 * delta);
    const double x_right = std::max(60.0 * delta, aw.profile.w_plus * t_end + 20.0 * delta);
    const double dx = delta / cells_per_delta;
    const int n = static_cast<int>(std::ceil((x_right - x_left) / dx));
    return nssolver::make_grid(x_left, x_left + n * dx, n);
}

PerturbationFields perturbation_fields(const nssolver::FieldState& state,
                                       const nssolver::Grid& grid,
                                       const smoothwave::ApproxWave& aw) {
    const int n = grid.n_cells;
    PerturbationFields f;
    f.phi.resize(n);
    f.psi.resize(n);
    double hint = grid.x_left;
    for (int i = 0; i < n; ++i) {
        const smoothwave::ApproxPoint ap =
            smoothwave::eval_approx_wave(aw, grid.center(i), state.t, hint);
        f.phi[i] = state.rho[i] - ap.rho;
        f.psi[i] = state.m[i] / state.rho[i] - ap.u;
    }
    return f;
}

WaveRow sample_wave(const smoothwave::ApproxWave& aw, const nssolver::Grid& grid, double t) {
    const int n = grid.n_cells;
    WaveRow row;
    row.rho.resize(n);
    row.u.resize(n);
    row.rho_x.resize(n);
    row.u_x.resize(n);
    row.u_xx.resize(n);
    double hint = grid.x_left;
    for (int i = 0; i < n; ++i) {
        const smoothwave::ApproxPoint ap =
            smoothwave::eval_approx_wave(aw, grid.center(i), t, hint);
        row.rho[i] = ap.rho;
        row.u[i] = ap.u;
        row.rho_x[i] = ap.rho_x;
        row.u_x[i] = ap.u_x;
        row.u_xx[i] = ap.u_xx;
    }
    return row;
}

EnergySample energy_functional(std::span<const double> phi, std::span<const double> psi,
                               std::span<const double> rho_bar, std::span<const double> u_bar_y,
                               double gamma, double dx, double epsilon) {
    const std::size_t n = phi.size();
    if (psi.size() != n || rho_bar.size() != n || u_bar_y.size() != n) {
        throw std::invalid_argument("energy_functional: array sizes must agree");
    }
    const double dy = dx / epsilon;  // measure of one cell in y = x/eps
    KahanSum quad;
    KahanSum grad;
    KahanSum diss;
    KahanSum diss_visc;
    for (std::size_t i = 0; i < n; ++i) {
        const double rb = rho_bar[i];
        const double rb_gm2 = std::pow(rb, gamma - 2.0);
        const double phi2 = phi[i] * phi[i];
        const double psi2 = psi[i] * psi[i];
        quad.add((rb * psi2 + rb_gm2 * phi2) * dy);
        double phi_y = 0.0;
        double psi_y = 0.0;
        double psi_yy = 0.0;
        if (i > 0 && i + 1 < n) {
            phi_y = epsilon * (phi[i + 1] - phi[i - 1]) / (2.0 * dx);
            psi_y = epsilon * (psi[i + 1] - psi[i - 1]) / (2.0 * dx);
            psi_yy = epsilon * epsilon * (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (dx * dx);
        }
        grad.add((phi_y * phi_y + psi_y * psi_y) * dy);
        const double d = psi_y * psi_y + rb_gm2 * u_bar_y[i] * phi2 + rb * u_bar_y[i] * psi2 +
                         rb_gm2 / rb * phi_y * phi_y + psi_yy * psi_yy / rb;
        diss.add(d * dy);
        diss_visc.add(psi_y * psi_y * dy);
    }
    return {quad.value(), grad.value(), diss.value(), diss_visc.value()};
}

EnergyAccumulator::EnergyAccumulator(const smoothwave::ApproxWave& aw,
                                     const nssolver::Grid& grid, double epsilon)
    : aw_(&aw), grid_(&grid), epsilon_(epsilon) {}

void EnergyAccumulator::add(const nssolver::FieldState& state) {
    const PerturbationFields f = perturbation_fields(state, *grid_, *aw_);
    WaveRow row = sample_wave(*aw_, *grid_, state.t);
    std::vector<double> u_bar_y(row.u_x.size());
    for (std::size_t i = 0; i < u_bar_y.size(); ++i) {
        u_bar_y[i] = epsilon_ * row.u_x[i];
    }
    const EnergySample es =
        energy_functional(f.phi, f.psi, row.rho, u_bar_y,
                          aw_->cutoff.base.gas.gamma(), grid_->dx, epsilon_);
    const double total = es.e_quadratic + es.e_gradient;
    if (total > energy_peak_) {
        energy_peak_ = total;
        peak_e_quadratic_ = es.e_quadratic;
        peak_e_gradient_ = es.e_gradient;
    }
    for (const double p : f.phi) {
        phi_inf_max_ = std::max(phi_inf_max_, std::abs(p));
    }
    if (has_prev_) {
        const double dtau = (state.t - prev_t_) / epsilon_;
        dissipation_total_ += 0.5 * (prev_rate_ + es.dissipation_rate) * dtau;
        dissipation_visc_ += 0.5 * (prev_rate_visc_ + es.dissipation_rate_visc) * dtau;
    }
    has_prev_ = true;
    prev_t_ = state.t;
    prev_rate_ = es.dissipation_rate;
    prev_rate_visc_ = es.dissipation_rate_visc;
}

EnergyReport EnergyAccumulator::report(const gasdyn::GasModel& gas) const {
    const double a = smoothwave::rate_exponents(gas).a;
    const double env =
        std::pow(epsilon_, 0.5 - a) * std::pow(std::abs(std::log(epsilon_)), -0.5);
    EnergyReport r;
    r.e_quadratic = peak_e_quadratic_;
    r.e_gradient = peak_e_gradient_;
    r.energy_peak = energy_peak_;
    r.dissipation_total = dissipation_total_;
    r.dissipation_visc = dissipation_visc_;
    r.bound_ratio = (energy_peak_ + dissipation_total_) / env;
    return r;
}

SourceTerms source_terms(const PerturbationFields& fields, const nssolver::Grid& grid,
                         const smoothwave::ApproxWave& aw, double epsilon, double t) {
    const int n = grid.n_cells;
    if (static_cast<int>(fields.phi.size()) != n || static_cast<int>(fields.psi.size()) != n) {
        throw std::invalid_argument("source_terms: field sizes must match the grid");
    }
    const gasdyn::GasModel& gas = aw.cutoff.base.gas;
    const WaveRow row = sample_wave(aw, grid, t);
    SourceTerms st;
    st.f.resize(n);
    st.g.resize(n);
    for (int i = 0; i < n; ++i) {
        const double u_bar_y = epsilon * row.u_x[i];
        const double rho_bar_y = epsilon * row.rho_x[i];
        const double u_bar_yy = epsilon * epsilon * row.u_xx[i];
        const double rho = row.rho[i] + fields.phi[i];
        st.f[i] = u_bar_y * fields.phi[i] + rho_bar_y * fields.psi[i];
        st.g[i] = -u_bar_yy + rho * fields.psi[i] * u_bar_y +
                  rho_bar_y * (gas.pressure_deriv(rho) -
                               rho / row.rho[i] * gas.pressure_deriv(row.rho[i]));
    }
    return st;
}

std::vector<double> mass_equation_residual(const nssolver::FieldState& prev,
                                           const nssolver::FieldState& mid,
                                           const nssolver::FieldState& next,
                                           const nssolver::Grid& grid,
                                           const smoothwave::ApproxWave& aw, double epsilon) {
    if (!(prev.t < mid.t) || !(mid.t < next.t)) {
        throw std::invalid_argument("mass_equation_residual: requires prev.t < mid.t < next.t");
    }
    const int n = grid.n_cells;
    const PerturbationFields fp = perturbation_fields(prev, grid, aw);
    const PerturbationFields fm = perturbation_fields(mid, grid, aw);
    const PerturbationFields fn = perturbation_fields(next, grid, aw);
    const SourceTerms st = source_terms(fm, grid, aw, epsilon, mid.t);
    std::vector<double> r(n, 0.0);
    const double dt = next.t - prev.t;
    for (int i = 1; i + 1 < n; ++i) {
        const double phi_tau = epsilon * (fn.phi[i] - fp.phi[i]) / dt;
        const double psi_y = epsilon * (fm.psi[i + 1] - fm.psi[i - 1]) / (2.0 * grid.dx);
        const double phi_y = epsilon * (fm.phi[i + 1] - fm.phi[i - 1]) / (2.0 * grid.dx);
        const double rho = mid.rho[i];
        const double u = mid.m[i] / rho;
        r[i] = phi_tau + rho * psi_y + u * phi_y + st.f[i];
    }
    return r;
}

CutoffGap cutoff_gap(const gasdyn::CutoffWave& cw, double xi_lo, double xi_hi, int n) {
    if (n < 2 || !(xi_lo < xi_hi)) {
        throw std::invalid_argument("cutoff_gap: requires xi_lo < xi_hi and n >= 2");
    }
    CutoffGap gap{0.0, 0.0};
    for (int i = 0; i <= n; ++i) {
        const double xi = xi_lo + (xi_hi - xi_lo) * i / n;
        const gasdyn::WavePoint c = gasdyn::eval_cutoff_wave(cw, xi);
        const gasdyn::WavePoint e = gasdyn::eval_exact_wave(cw.base, xi);
        gap.rho = std::max(gap.rho, std::abs(c.rho - e.rho));
        gap.m = std::max(gap.m, std::abs(c.m - e.m));
    }
    return gap;
}

CutoffGap cutoff_gap(const gasdyn::CutoffWave& cw, int n) {
    const double width = cw.base.lambda2_plus - cw.base.u_minus;
    const double pad = std::max(1.0, 0.25 * width);
    return cutoff_gap(cw, cw.base.u_minus - pad, cw.base.lambda2_plus + pad, n);
}

RateModel density_rate_model(const gasdyn::GasModel& gas) {
    return {smoothwave::rate_exponents(gas).a, 1.0};
}

RateModel momentum_rate_model(const gasdyn::GasModel& gas) {
    const smoothwave::RateExponents re = smoothwave::rate_exponents(gas);
    return re.momentum_log_augmented ? RateModel{re.b, 1.0} : RateModel{re.b, -0.5};
}

double rate_envelope(const RateModel& model, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::domain_error("rate_envelope: epsilon must lie in (0, 1)");
    }
    return std::pow(epsilon, model.exponent) *
           std::pow(std::abs(std::log(epsilon)), model.log_power);
}

RateFit fit_rate(std::span<const double> epsilons, std::span<const double> errors,
                 const RateModel& model) {
    const std::size_t n = epsilons.size();
    if (n < 3 || errors.size() != n) {
        throw std::invalid_argument("fit_rate: needs >= 3 matching (epsilon, error) records");
    }
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(epsilons[i] > 0.0) || !(errors[i] > 0.0)) {
            throw std::invalid_argument("fit_rate: epsilons and errors must be positive");
        }
        xs[i] = std::log(epsilons[i]);
        ys[i] = std::log(errors[i]);
    }
    double xm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= n;
    ym /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - xm) * (ys[i] - ym);
        sxx += (xs[i] - xm) * (xs[i] - xm);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_rate: epsilons must be distinct");
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.ratio_series.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit.ratio_series[i] = errors[i] / rate_envelope(model, epsilons[i]);
    }
    return fit;
}

CaseResult run_case_full(const SweepConfig& config, double epsilon) {
    const auto t_start = std::chrono::steady_clock::now();
    const smoothwave::Schedule sched =
        smoothwave::make_schedule(config.gas, config.right.rho_plus, epsilon, config.c_mu);
    const gasdyn::ExactWave exact = gasdyn::build_exact_wave(config.gas, config.right);
    const gasdyn::CutoffWave cut = gasdyn::build_cutoff_wave(exact, sched.mu);
    const smoothwave::ApproxWave aw = smoothwave::build_approx_wave(cut, sched.delta);

    const nssolver::Grid grid =
        case_grid(aw, sched.delta, config.t_end, config.cells_per_delta);
    nssolver::SolverConfig scfg;
    scfg.epsilon = epsilon;
    scfg.cfl = config.cfl;
    scfg.order = config.order;
    scfg.t_end = config.t_end;

    nssolver::FieldState state = init_from_wave(aw, grid);
    EnergyAccumulator acc(aw, grid, epsilon);
    acc.add(state);
    const std::vector<double> samples = config.sample_times.empty()
                                            ? default_sample_times(config.h, config.t_end)
                                            : config.sample_times;

    double err_rho = 0.0;
    double err_m = 0.0;
    const nssolver::StepObserver observer = [&](const nssolver::FieldState& s) { acc.add(s); };
    for (const double ts : samples) {
        state = nssolver::advance_to(std::move(state), grid, scfg, aw, ts, observer);
        for (int i = 0; i < grid.n_cells; ++i) {
            const gasdyn::WavePoint ex = gasdyn::eval_exact_wave(exact, grid.center(i) / ts);
            err_rho = std::max(err_rho, std::abs(state.rho[i] - ex.rho));
            err_m = std::max(err_m, std::abs(state.m[i] - ex.m));
        }
    }

    const EnergyReport er = acc.report(config.gas);
    SweepRecord rec;
    rec.epsilon = epsilon;
    rec.mu = sched.mu;
    rec.delta = sched.delta;
    rec.err_rho_inf = err_rho;
    rec.err_m_inf = err_m;
    rec.ratio_rho = err_rho / rate_envelope(density_rate_model(config.gas), epsilon);
    rec.ratio_m = err_m / rate_envelope(momentum_rate_model(config.gas), epsilon);
    rec.energy_peak = er.energy_peak;
    rec.dissipation_total = er.dissipation_total;
    rec.bound_ratio = er.bound_ratio;
    rec.min_rho = state.min_rho_seen;
    rec.max_speed = state.max_speed_seen;
    rec.phi_inf_max = acc.phi_inf_max();
    rec.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {rec, grid, std::move(state)};
}

SweepRecord run_case(const SweepConfig& config, double epsilon) {
    return run_case_full(config, epsilon).record;
}

}  // namespace vvlab::limitlab
