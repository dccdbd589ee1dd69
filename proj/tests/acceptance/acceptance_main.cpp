// Acceptance suite: one pass/fail line per criterion, exit code = number of failed
// criteria. Optional arguments select criteria by id, e.g. `vvlab_acceptance C4 C9`.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "support/sampling.hpp"
#include "vvlab/limitlab.hpp"

using namespace vvlab;
using gasdyn::GasModel;
using nssolver::FieldState;
using nssolver::Grid;

namespace {

int g_failures = 0;
std::vector<std::string> g_filters;

bool enabled(const std::string& id) {
    if (g_filters.empty()) {
        return true;
    }
    for (const auto& f : g_filters) {
        if (id == f) {
            return true;
        }
    }
    return false;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(const std::string& id, bool pass, const std::string& detail) {
    std::printf("[%s] %-4s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    if (!pass) {
        ++g_failures;
    }
}

// Sub-check line under a criterion; informative only, not counted separately.
void report_sub(const std::string& id, bool pass, const std::string& detail) {
    std::printf("       %s %-4s %s\n", pass ? "[ok]" : "[!!]", id.c_str(), detail.c_str());
}

void info(const std::string& id, const std::string& detail) {
    std::printf("[info] %-4s %s\n", id.c_str(), detail.c_str());
}

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

void run_criterion(const std::string& id, const std::function<void()>& body) {
    if (!enabled(id)) {
        return;
    }
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, fmt("exception: %s", e.what()));
    }
}

smoothwave::ApproxWave make_wave(double gamma, double rho_plus, double u_plus, double mu,
                                 double delta) {
    const auto exact = gasdyn::build_exact_wave(GasModel(gamma), {rho_plus, u_plus});
    return smoothwave::build_approx_wave(gasdyn::build_cutoff_wave(exact, mu), delta);
}

// ---------------------------------------------------------------------------
// C1: implicit Burgers solve, residual and monotonicity on quasi-random points
// ---------------------------------------------------------------------------
void criterion1() {
    const auto p = smoothwave::make_burgers_profile(-1.0, 1.0, 0.5);
    testsupport::QuasiRandom2D seq;
    const double t0 = now_seconds();
    double max_scaled_resid = 0.0;
    double min_wx = std::numeric_limits<double>::infinity();
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto [ux, ut] = seq.next();
        const double x = -50.0 + 100.0 * ux;
        const double t = 100.0 * ut;
        const double x0 = smoothwave::solve_x0(p, x, t);
        const double resid = std::abs(x0 + t * smoothwave::burgers_initial(p, x0) - x);
        max_scaled_resid = std::max(max_scaled_resid, resid / (1.0 + std::abs(x)));
        min_wx = std::min(min_wx, smoothwave::eval_w(p, x, t).w_x);
    }
    const double elapsed = now_seconds() - t0;
    const bool pass = max_scaled_resid <= 1e-12 && min_wx > 0.0 && elapsed < 1.0;
    report("C1", pass,
           fmt("implicit solve on %d points in [-50,50]x[0,100]: max |resid|/(1+|x|) = %.2e "
               "(<= 1e-12), min w_x = %.2e (> 0), %.2f s (< 1 s)",
               n, max_scaled_resid, min_wx, elapsed));
}

// ---------------------------------------------------------------------------
// C2: pointwise curvature bound |w_xx| <= (4/delta) w_x, zero violations
// ---------------------------------------------------------------------------
void criterion2() {
    bool pass = true;
    std::string detail = "sup |w_xx|/w_x vs 4/delta on 1e5 samples per delta:";
    for (const double delta : {0.05, 0.1, 0.5}) {
        const auto p = smoothwave::make_burgers_profile(-1.0, 1.0, delta);
        testsupport::QuasiRandom2D seq;
        long violations = 0;
        double sup_ratio = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const auto [ux, ut] = seq.next();
            const auto w = smoothwave::eval_w(p, -50.0 + 100.0 * ux, 100.0 * ut);
            if (std::abs(w.w_xx) > 4.0 / delta * w.w_x) {
                ++violations;
            }
            if (w.w_x > 0.0) {
                sup_ratio = std::max(sup_ratio, std::abs(w.w_xx) / w.w_x);
            }
        }
        pass = pass && violations == 0;
        detail += fmt(" [delta=%.2f: %.3f vs %.1f, %ld violations]", delta, sup_ratio,
                      4.0 / delta, violations);
    }
    report("C2", pass, detail);
}

// ---------------------------------------------------------------------------
// C3: approximate-wave identities across gamma
// ---------------------------------------------------------------------------
void criterion3() {
    double worst_sigma = 0.0;
    double worst_identity = 0.0;
    double order_lo = std::numeric_limits<double>::infinity();
    double order_hi = 0.0;
    for (const double gamma : {1.5, 2.0, 3.0, 5.0}) {
        const auto aw = make_wave(gamma, 1.5, 0.3, 0.3, 0.25);
        for (const double t : {0.5, 2.0}) {
            const auto xs = testsupport::linspace(aw.profile.w_minus * t - 2.0,
                                                  aw.profile.w_plus * t + 2.0, 401);
            const auto r = smoothwave::verify_wave_identities(aw, xs, t);
            worst_sigma = std::max(worst_sigma, r.max_sigma2_rel_dev);
            worst_identity = std::max(worst_identity, r.max_slope_identity_res);
            order_lo = std::min({order_lo, r.fd_order_u, r.fd_order_rho});
            order_hi = std::max({order_hi, r.fd_order_u, r.fd_order_rho});
        }
    }
    const bool pass = worst_sigma <= 1e-10 && worst_identity <= 1e-12 && order_lo >= 1.9 &&
                      order_hi <= 2.1;
    report("C3", pass,
           fmt("gamma in {1.5,2,3,5}: max Sigma2 rel dev = %.2e (<= 1e-10), max slope "
               "identity = %.2e (<= 1e-12), FD orders in [%.3f, %.3f] (within [1.9, 2.1])",
               worst_sigma, worst_identity, order_lo, order_hi));
}

// ---------------------------------------------------------------------------
// C4: cut-off gap exactness and halving ratios
// ---------------------------------------------------------------------------
void criterion4() {
    const auto exact3 = gasdyn::build_exact_wave(GasModel(3.0), {1.0, 0.0});
    const auto g3a = limitlab::cutoff_gap(gasdyn::build_cutoff_wave(exact3, 0.2));
    const auto g3b = limitlab::cutoff_gap(gasdyn::build_cutoff_wave(exact3, 0.1));
    const bool exact_ok = std::abs(g3a.rho - 0.2) <= 1e-9 * 0.2 &&
                          std::abs(g3a.rho / g3b.rho - 2.0) <= 1e-9;

    const auto exact2 = gasdyn::build_exact_wave(GasModel(2.0), {1.0, 0.0});
    const double mus[3] = {0.04, 0.02, 0.01};
    limitlab::CutoffGap gaps[3];
    for (int i = 0; i < 3; ++i) {
        gaps[i] = limitlab::cutoff_gap(gasdyn::build_cutoff_wave(exact2, mus[i]));
    }
    double rho_ratios[2];
    double m_ratios[2];
    bool band_ok = true;
    for (int i = 0; i < 2; ++i) {
        rho_ratios[i] = gaps[i].rho / gaps[i + 1].rho;
        m_ratios[i] = gaps[i].m / gaps[i + 1].m;
        band_ok = band_ok && rho_ratios[i] >= 1.8 && rho_ratios[i] <= 2.2 &&
                  m_ratios[i] >= 1.8 && m_ratios[i] <= 2.2;
    }
    report("C4", exact_ok && band_ok,
           fmt("gamma=3: gap_rho = %.12f (mu = 0.2), halving ratio = %.12f; gamma=2 ratios "
               "rho {%.3f, %.3f}, m {%.3f, %.3f} (within [1.8, 2.2])",
               g3a.rho, g3a.rho / g3b.rho, rho_ratios[0], rho_ratios[1], m_ratios[0],
               m_ratios[1]));
}

// ---------------------------------------------------------------------------
// C5: solver correctness (constant state, conservation audit, self-convergence)
// ---------------------------------------------------------------------------
void criterion5() {
    double t0 = now_seconds();
    const auto aw3 = make_wave(3.0, 1.0, 0.0, 0.25, 0.1);
    const Grid gc = nssolver::make_grid(2.5, 6.5, 64);
    double const_change = 0.0;
    for (const int order : {1, 2}) {
        nssolver::SolverConfig cfg;
        cfg.epsilon = 1e-3;
        cfg.order = order;
        FieldState s;
        s.rho = std::vector<double>(64, 1.0);
        s.m = std::vector<double>(64, 0.0);
        const FieldState s1 = nssolver::step(s, gc, cfg, aw3);
        for (int i = 0; i < 64; ++i) {
            const_change =
                std::max({const_change, std::abs(s1.rho[i] - 1.0), std::abs(s1.m[i])});
        }
    }
    const double t_const = now_seconds() - t0;

    t0 = now_seconds();
    const auto aw = make_wave(2.0, 2.0, 1.0, 0.8, 0.3);
    const Grid g = nssolver::make_grid(-18.6, 19.2, 1260);
    nssolver::SolverConfig cfg;
    cfg.epsilon = 1e-3;
    FieldState s = nssolver::init_from_wave(aw, g);
    const double mass0 = nssolver::mass_total(s, g);
    for (int k = 0; k < 1000; ++k) {
        s = nssolver::step(s, g, cfg, aw);
    }
    const double drift =
        std::abs(nssolver::mass_total(s, g) - mass0 - s.boundary_mass_in) / mass0;
    const double t_mass = now_seconds() - t0;

    t0 = now_seconds();
    auto run = [&](int n) {
        const Grid gr = nssolver::make_grid(-18.6, 19.2, n);
        nssolver::SolverConfig c2;
        c2.epsilon = 1e-3;
        return nssolver::advance_to(nssolver::init_from_wave(aw, gr), gr, c2, aw, 0.25);
    };
    auto restrict_diff = [&](const FieldState& fine, const FieldState& coarse, double dxc) {
        double e = 0.0;
        for (std::size_t i = 0; i < coarse.rho.size(); ++i) {
            e += (std::abs(0.5 * (fine.rho[2 * i] + fine.rho[2 * i + 1]) - coarse.rho[i]) +
                  std::abs(0.5 * (fine.m[2 * i] + fine.m[2 * i + 1]) - coarse.m[i])) *
                 dxc;
        }
        return e;
    };
    const FieldState r1 = run(1260);
    const FieldState r2 = run(2520);
    const FieldState r3 = run(5040);
    const double e1 = restrict_diff(r2, r1, 37.8 / 1260);
    const double e2 = restrict_diff(r3, r2, 37.8 / 2520);
    const double order = std::log2(e1 / e2);
    const double t_conv = now_seconds() - t0;

    const bool pass = const_change <= 1e-13 && drift <= 1e-12 && order >= 1.8 &&
                      t_const < 30.0 && t_mass < 30.0 && t_conv < 30.0;
    report("C5", pass,
           fmt("constant-state change = %.2e (<= 1e-13, %.2f s); conservation drift over "
               "1e3 steps = %.2e (<= 1e-12, %.2f s); self-convergence order = %.3f "
               "(>= 1.8, %.2f s)",
               const_change, t_const, drift, t_mass, order, t_conv));
}

// ---------------------------------------------------------------------------
// C6/C7: pinned viscosity sweeps; C8: energy-bound ratio of the gamma=2 sweep
// ---------------------------------------------------------------------------
limitlab::SweepConfig sweep_config(double gamma) {
    limitlab::SweepConfig cfg{GasModel(gamma), {2.0, 0.0}, {4e-3, 2e-3, 1e-3, 5e-4},
                              0.5,             2.0,        {},
                              0.37,            50,         2,
                              0.45};
    return cfg;
}

struct SweepRun {
    std::vector<limitlab::SweepRecord> records;
    double runtime = 0.0;
};

SweepRun run_sweep(double gamma) {
    const limitlab::SweepConfig cfg = sweep_config(gamma);
    limitlab::validate(cfg);
    SweepRun out;
    const double t0 = now_seconds();
    for (const double eps : cfg.epsilons) {
        out.records.push_back(limitlab::run_case(cfg, eps));
    }
    out.runtime = now_seconds() - t0;
    return out;
}

const SweepRun& gamma2_sweep() {
    static const SweepRun run = run_sweep(2.0);
    return run;
}

struct TrendResult {
    bool monotone;
    double max_ratio_step;    // max relative change of the density ratio series
    double max_ratio_step_m;  // same for the momentum ratio series
    double slope;
};

TrendResult analyze_sweep(const SweepRun& run, const GasModel& gas) {
    TrendResult t{true, 0.0, 0.0, 0.0};
    std::vector<double> eps;
    std::vector<double> err;
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        const auto& r = run.records[i];
        eps.push_back(r.epsilon);
        err.push_back(r.err_rho_inf);
        if (i > 0) {
            const auto& p = run.records[i - 1];
            t.monotone = t.monotone && r.err_rho_inf < p.err_rho_inf;
            t.max_ratio_step =
                std::max(t.max_ratio_step, std::abs(r.ratio_rho - p.ratio_rho) / p.ratio_rho);
            t.max_ratio_step_m =
                std::max(t.max_ratio_step_m, std::abs(r.ratio_m - p.ratio_m) / p.ratio_m);
        }
    }
    t.slope = limitlab::fit_rate(eps, err, limitlab::density_rate_model(gas)).slope;
    return t;
}

std::string sweep_table(const SweepRun& run) {
    std::string s;
    for (const auto& r : run.records) {
        s += fmt("\n        eps=%8.1e  mu=%.6f  err_rho_inf=%.8f  err_m_inf=%.8f  "
                 "ratio_rho=%.6f  ratio_m=%.6f  bound_ratio=%.4e",
                 r.epsilon, r.mu, r.err_rho_inf, r.err_m_inf, r.ratio_rho, r.ratio_m,
                 r.bound_ratio);
    }
    return s;
}

void criterion6() {
    const SweepRun& run = gamma2_sweep();
    const TrendResult t = analyze_sweep(run, GasModel(2.0));
    const double slope_min = 1.0 / 6.0 - 0.05;
    const bool pass_a = t.monotone;
    const bool pass_b = t.max_ratio_step <= 0.25;
    const bool pass_c = t.slope >= slope_min;
    const bool pass_time = run.runtime < 600.0;
    report("C6", pass_a && pass_b && pass_c && pass_time,
           fmt("gamma=2 sweep (rho+=2, c_mu=0.37, %.0f s < 600 s):%s", run.runtime,
               sweep_table(run).c_str()));
    report_sub("C6a", pass_a, "err_rho_inf strictly decreasing across the sweep");
    report_sub("C6b", pass_b,
           fmt("density ratio err/(eps^(1/6)|ln eps|) consecutive variation = %.2f%% (<= 25%%)",
               100.0 * t.max_ratio_step));
    report_sub("C6c", pass_c, fmt("fitted density slope = %.4f (>= %.5f)", t.slope, slope_min));
}

void criterion7() {
    const SweepRun run = run_sweep(3.0);
    const TrendResult t = analyze_sweep(run, GasModel(3.0));
    const double slope_min = 1.0 / 7.0 - 0.05;
    const bool pass_a = t.monotone;
    const bool pass_b = t.max_ratio_step <= 0.25 && t.max_ratio_step_m <= 0.25;
    const bool pass_c = t.slope >= slope_min;
    const bool pass_time = run.runtime < 600.0;
    report("C7", pass_a && pass_b && pass_c && pass_time,
           fmt("gamma=3 sweep (momentum ratio on the eps^(1/7)|ln eps| branch, %.0f s):%s",
               run.runtime, sweep_table(run).c_str()));
    report_sub("C7a", pass_a, "err_rho_inf strictly decreasing across the sweep");
    report_sub("C7b", pass_b,
           fmt("ratio variations: density %.2f%%, momentum %.2f%% (<= 25%%)",
               100.0 * t.max_ratio_step, 100.0 * t.max_ratio_step_m));
    report_sub("C7c", pass_c, fmt("fitted density slope = %.4f (>= %.5f)", t.slope, slope_min));
}

void criterion8() {
    const SweepRun& run = gamma2_sweep();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool trend_ok = true;
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        const double b = run.records[i].bound_ratio;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
        if (i > 0) {
            // non-increasing across halvings, with 25% slack
            trend_ok = trend_ok && b <= 1.25 * run.records[i - 1].bound_ratio;
        }
    }
    report("C8", hi / lo <= 2.0 && trend_ok,
           fmt("energy bound ratio [peak + dissipation]/(eps^(1/2-a)|ln eps|^(-1/2)) across "
               "the gamma=2 sweep: max/min = %.3f (<= 2), non-increasing within 25%%: %s",
               hi / lo, trend_ok ? "yes" : "no"));
}

void criterion9() {
    std::vector<double> eps;
    std::vector<double> err_pow;
    std::vector<double> err_log;
    for (const double e : {4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4}) {
        eps.push_back(e);
        err_pow.push_back(std::pow(e, 1.0 / 6.0));
        err_log.push_back(3.0 * std::pow(e, 1.0 / 8.0) / std::sqrt(std::abs(std::log(e))));
    }
    const auto fit1 =
        limitlab::fit_rate(eps, err_pow, limitlab::density_rate_model(GasModel(2.0)));
    const double slope_err = std::abs(fit1.slope - 1.0 / 6.0);
    const auto fit2 =
        limitlab::fit_rate(eps, err_log, limitlab::momentum_rate_model(GasModel(1.5)));
    double const_err = 0.0;
    for (const double r : fit2.ratio_series) {
        const_err = std::max(const_err, std::abs(r - 3.0));
    }
    report("C9", slope_err <= 1e-10 && const_err <= 1e-9,
           fmt("synthetic eps^(1/6): |slope - 1/6| = %.2e (<= 1e-10); synthetic "
               "3 eps^(1/8)|ln eps|^(-1/2): max |ratio - 3| = %.2e (<= 1e-9)",
               slope_err, const_err));
}

void criterion10() {
    const auto aw = make_wave(2.0, 2.0, 1.0, 0.8, 0.35);
    const double eps = 1e-3;
    const double t_mid = 0.5;
    auto residual_norm = [&](int cells_per_delta) {
        const double dx = 0.35 / cells_per_delta;
        const Grid g = nssolver::make_grid(-21.0, 21.0, static_cast<int>(42.0 / dx));
        nssolver::SolverConfig cfg;
        cfg.epsilon = eps;
        const double k = 2.0 * g.dx;
        FieldState s = nssolver::init_from_wave(aw, g);
        s = nssolver::advance_to(std::move(s), g, cfg, aw, t_mid - k);
        const FieldState prev = s;
        s = nssolver::advance_to(std::move(s), g, cfg, aw, t_mid);
        const FieldState mid = s;
        const FieldState next = nssolver::advance_to(std::move(s), g, cfg, aw, t_mid + k);
        const auto r = limitlab::mass_equation_residual(prev, mid, next, g, aw, eps);
        double l1 = 0.0;
        for (const double v : r) {
            l1 += std::abs(v) * g.dx;
        }
        return l1;
    };
    const double r1 = residual_norm(20);
    const double r2 = residual_norm(40);
    const double r3 = residual_norm(80);
    const double order = 0.5 * std::log2(r1 / r3);
    const bool pass = r1 > r2 && r2 > r3 && order >= 1.8;
    report("C10", pass,
           fmt("mass-equation residual L1 under dx, dx/2, dx/4: %.3e, %.3e, %.3e; mean "
               "order = %.3f (>= 1.8)",
               r1, r2, r3, order));
}

// Non-gating diagnostic: the same gamma=2 trend far below the pinned epsilon window,
// where the |ln eps| factor of the cut level no longer masks the power law.
void deep_sweep_info() {
    limitlab::SweepConfig cfg{GasModel(2.0), {2.0, 0.0}, {1e-10, 1e-11, 1e-12},
                              0.5,           2.0,        {},
                              0.37,          12,         2,
                              0.45};
    limitlab::validate(cfg);
    std::vector<double> eps;
    std::vector<double> err;
    std::string table;
    bool monotone = true;
    const double t0 = now_seconds();
    for (const double e : cfg.epsilons) {
        const auto r = limitlab::run_case(cfg, e);
        if (!err.empty()) {
            monotone = monotone && r.err_rho_inf < err.back();
        }
        eps.push_back(e);
        err.push_back(r.err_rho_inf);
        table += fmt("\n        eps=%8.1e  mu=%.6f  err_rho_inf=%.8f  ratio_rho=%.6f",
                     r.epsilon, r.mu, r.err_rho_inf, r.ratio_rho);
    }
    const double slope =
        limitlab::fit_rate(eps, err, limitlab::density_rate_model(GasModel(2.0))).slope;
    info("C6x", fmt("diagnostic gamma=2 sweep at eps in {1e-10, 1e-11, 1e-12} "
                    "(cells_per_delta=12, %.0f s): strictly decreasing = %s, fitted density "
                    "slope = %.4f:%s",
                    now_seconds() - t0, monotone ? "yes" : "no", slope, table.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        g_filters.emplace_back(argv[i]);
    }
    run_criterion("C1", criterion1);
    run_criterion("C2", criterion2);
    run_criterion("C3", criterion3);
    run_criterion("C4", criterion4);
    run_criterion("C5", criterion5);
    run_criterion("C6", criterion6);
    run_criterion("C7", criterion7);
    run_criterion("C8", criterion8);
    run_criterion("C9", criterion9);
    run_criterion("C10", criterion10);
    if (enabled("C6x")) {
        try {
            deep_sweep_info();
        } catch (const std::exception& e) {
            info("C6x", fmt("diagnostic sweep failed: %s", e.what()));
        }
    }
    std::printf("%d criterion failure(s)\n", g_failures);
    return g_failures;
}
