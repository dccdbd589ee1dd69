#include "vvlab/smoothwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vvlab::smoothwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sech2(double s) {
    const double e = std::exp(-2.0 * std::abs(s));
    const double r = 1.0 + e;
    return 4.0 * e / (r * r);
}

// Recursive adaptive Simpson with Richardson correction.
template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Panelized before recursing so narrow interior features are always sampled.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol) {
    const int k = 64;
    std::vector<double> fx(2 * k + 1);
    for (int j = 0; j <= 2 * k; ++j) {
        fx[j] = f(a + (b - a) * j / (2 * k));
    }
    const double h = (b - a) / k;
    double scale = 0.0;
    for (int i = 0; i < k; ++i) {
        scale += h / 6.0 * (std::abs(fx[2 * i]) + 4.0 * std::abs(fx[2 * i + 1]) +
                            std::abs(fx[2 * i + 2]));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const double pa = a + i * h;
        const double pb = pa + h;
        const double whole = h / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
        total += simpson_rec(f, pa, pb, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], whole,
                             rel_tol * scale / k, 24);
    }
    return total;
}

// Maximum of f over [a, b]: dense scan plus golden-section refinement of the best bracket.
template <typename F>
double scan_max(const F& f, double a, double b, int n) {
    double best = -kInf;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double v = f(x);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double lo = a + (b - a) * std::max(best_i - 1, 0) / n;
    double hi = a + (b - a) * std::min(best_i + 1, n) / n;
    const double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max({best, f1, f2});
}

}  // namespace

BurgersProfile make_burgers_profile(double w_minus, double w_plus, double delta) {
    if (!(w_minus < w_plus)) {
        throw std::domain_error("BurgersProfile: requires w_minus < w_plus");
    }
    if (!(delta > 0.0)) {
        throw std::domain_error("BurgersProfile: requires delta > 0");
    }
    return {w_minus, w_plus, delta};
}

double burgers_initial(const BurgersProfile& p, double x) {
    return 0.5 * (p.w_plus + p.w_minus) + 0.5 * (p.w_plus - p.w_minus) * std::tanh(x / p.delta);
}

double burgers_initial_slope(const BurgersProfile& p, double x) {
    return 0.5 * (p.w_plus - p.w_minus) / p.delta * sech2(x / p.delta);
}

double burgers_initial_curvature(const BurgersProfile& p, double x) {
    const double s = x / p.delta;
    return -(p.w_plus - p.w_minus) / (p.delta * p.delta) * sech2(s) * std::tanh(s);
}

double solve_x0(const BurgersProfile& p, double x, double t, double guess) {
    if (!(t >= 0.0)) {
        throw std::domain_error("solve_x0: t must be >= 0");
    }
    if (t == 0.0) {
        return x;
    }
    // Half the contracted residual bound of 1e-12 (1 + |x|), for margin.
    const double tol = 0.5e-12 * (1.0 + std::abs(x));
    double lo = x - t * p.w_plus;
    double hi = x - t * p.w_minus;
    // Safeguarded Newton: F' = 1 + t w_delta' >= 1 and the bracket [lo, hi] encloses the
    // root; bisect whenever the Newton step leaves the bracket or fails to contract.
    double s = std::clamp(guess, lo, hi);
    double f = s + t * burgers_initial(p, s) - x;
    double step_prev = hi - lo;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(f) <= tol) {
            return s;
        }
        if (f > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        const double fp = 1.0 + t * burgers_initial_slope(p, s);
        const double newton = f / fp;
        double step;
        if (((s - hi) * fp - f) * ((s - lo) * fp - f) > 0.0 ||
            std::abs(2.0 * f) > std::abs(step_prev * fp)) {
            step = s - 0.5 * (lo + hi);  // bisect
        } else {
            step = newton;
        }
        step_prev = step;
        s -= step;
        f = s + t * burgers_initial(p, s) - x;
    }
    throw std::runtime_error("solve_x0: iteration budget exceeded");
}

double solve_x0(const BurgersProfile& p, double x, double t) {
    return solve_x0(p, x, t, x - t * 0.5 * (p.w_minus + p.w_plus));
}

WDeriv eval_w(const BurgersProfile& p, double x, double t, double& x0_hint) {
    const double x0 = solve_x0(p, x, t, x0_hint);
    x0_hint = x0;
    const double d1 = burgers_initial_slope(p, x0);
    const double d2 = burgers_initial_curvature(p, x0);
    const double denom = 1.0 + t * d1;
    return {burgers_initial(p, x0), d1 / denom, d2 / (denom * denom * denom)};
}

WDeriv eval_w(const BurgersProfile& p, double x, double t) {
    double hint = x - t * 0.5 * (p.w_minus + p.w_plus);
    return eval_w(p, x, t, hint);
}

RateExponents rate_exponents(const gasdyn::GasModel& gas) {
    const double g = gas.gamma();
    const double a = (g <= 2.0) ? 1.0 / 6.0 : 1.0 / (g + 4.0);
    if (g < 3.0) {
        const double b = (g <= 2.0) ? 1.0 / 8.0 : (g + 1.0) / (4.0 * (g + 4.0));
        return {a, b, false};
    }
    return {a, 1.0 / (g + 4.0), true};
}

Schedule make_schedule(const gasdyn::GasModel& gas, double rho_plus, double epsilon, double c_mu) {
    if (!(rho_plus > 0.0)) {
        throw std::domain_error("make_schedule: rho_plus must be > 0");
    }
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::domain_error("make_schedule: epsilon must lie in (0, 1)");
    }
    if (!(c_mu > 0.0)) {
        throw std::domain_error("make_schedule: c_mu must be > 0");
    }
    const double a = rate_exponents(gas).a;
    const double delta = std::pow(epsilon, a);
    const double mu = c_mu * delta * std::abs(std::log(epsilon));
    if (mu > 0.5 * rho_plus) {
        throw std::invalid_argument("make_schedule: infeasible schedule, mu = " +
                                    std::to_string(mu) + " exceeds rho_plus/2 = " +
                                    std::to_string(0.5 * rho_plus) +
                                    " (lower c_mu or epsilon)");
    }
    if (mu < 2.0 * delta) {
        throw std::invalid_argument("make_schedule: infeasible schedule, mu = " +
                                    std::to_string(mu) + " is below 2*delta = " +
                                    std::to_string(2.0 * delta) + " (raise c_mu)");
    }
    return {epsilon, a, mu, delta, c_mu};
}

ApproxWave build_approx_wave(const gasdyn::CutoffWave& cutoff, double delta) {
    return {cutoff, make_burgers_profile(cutoff.lambda2_minus, cutoff.base.lambda2_plus, delta),
            cutoff.base.sigma2};
}

ApproxPoint eval_approx_wave(const ApproxWave& aw, double x, double t, double& x0_hint) {
    const WDeriv w = eval_w(aw.profile, x, t, x0_hint);
    const double g = aw.cutoff.base.gas.gamma();
    const double s = (g - 1.0) / (g + 1.0) * (w.w - aw.sigma2);
    const double rho = std::pow(s, 2.0 / (g - 1.0));
    const double u = w.w - s;
    const double u_x = 2.0 / (g + 1.0) * w.w_x;
    const double rho_x = std::pow(rho, 0.5 * (3.0 - g)) * u_x;
    const double u_xx = 2.0 / (g + 1.0) * w.w_xx;
    return {rho, u, rho_x, u_x, u_xx};
}

ApproxPoint eval_approx_wave(const ApproxWave& aw, double x, double t) {
    double hint = x - t * 0.5 * (aw.profile.w_minus + aw.profile.w_plus);
    return eval_approx_wave(aw, x, t, hint);
}

BurgersEstimateReport verify_burgers_estimates(const BurgersProfile& p, double t, double p_norm) {
    if (!(t > 0.0)) {
        throw std::domain_error("verify_burgers_estimates: t must be > 0");
    }
    if (!(p_norm >= 1.0)) {
        throw std::domain_error("verify_burgers_estimates: norm order must be >= 1");
    }
    const double W = p.w_plus - p.w_minus;
    const double delta = p.delta;
    const double X = 60.0 * delta;  // integrands decay like sech^2 beyond the window

    // All integrals are taken in the Lagrangian coordinate x0 (the map x0 -> x is
    // monotone with Jacobian 1 + t w_delta'):
    //   int |w_x|^p dx  = int (w')^p (1 + t w')^(1-p)  dx0,
    //   int |w_xx|^p dx = int |w''|^p (1 + t w')^(1-3p) dx0.
    double norm_wx = 0.0;
    double norm_wxx = 0.0;
    if (std::isinf(p_norm)) {
        norm_wx = scan_max(
            [&](double s) {
                const double d1 = burgers_initial_slope(p, s);
                return d1 / (1.0 + t * d1);
            },
            -X, X, 4000);
        norm_wxx = scan_max(
            [&](double s) {
                const double d1 = burgers_initial_slope(p, s);
                const double denom = 1.0 + t * d1;
                return std::abs(burgers_initial_curvature(p, s)) / (denom * denom * denom);
            },
            -X, X, 4000);
    } else {
        const double q = p_norm;
        norm_wx = std::pow(adaptive_simpson(
                               [&](double s) {
                                   const double d1 = burgers_initial_slope(p, s);
                                   return std::pow(d1, q) * std::pow(1.0 + t * d1, 1.0 - q);
                               },
                               -X, X, 1e-12),
                           1.0 / q);
        norm_wxx = std::pow(adaptive_simpson(
                                [&](double s) {
                                    const double d1 = burgers_initial_slope(p, s);
                                    const double d2 = burgers_initial_curvature(p, s);
                                    return std::pow(std::abs(d2), q) *
                                           std::pow(1.0 + t * d1, 1.0 - 3.0 * q);
                                },
                                -X, X, 1e-12),
                            1.0 / q);
    }

    // Pointwise ratio |w_xx|/w_x = (2/delta)|tanh(x0/delta)| / (1 + t w')^2.
    const double sup_ratio = scan_max(
        [&](double s) {
            const double d1 = burgers_initial_slope(p, s);
            const double denom = 1.0 + t * d1;
            return 2.0 / delta * std::abs(std::tanh(s / delta)) / (denom * denom);
        },
        -X, X, 4000);

    // Gap to the sharp fan w_r(x/t) = clamp(x/t, w-, w+).
    const double Xg = X + t * W;
    double sup_gap = 0.0;
    const int ng = 50000;
    for (int i = 0; i <= ng; ++i) {
        const double s = -Xg + 2.0 * Xg * i / ng;
        const double w = burgers_initial(p, s);
        const double xi = (s + t * w) / t;
        const double wr = std::clamp(xi, p.w_minus, p.w_plus);
        sup_gap = std::max(sup_gap, std::abs(w - wr));
    }

    const double inv_p = std::isinf(p_norm) ? 0.0 : 1.0 / p_norm;
    BurgersEstimateReport r;
    r.t = t;
    r.p = p_norm;
    r.norm_wx = norm_wx;
    r.norm_wxx = norm_wxx;
    r.env_wx = std::pow(W, inv_p) * std::pow(delta + t, -1.0 + inv_p);
    r.env_wxx = std::pow(delta + t, -1.0) * std::pow(delta, -1.0 + inv_p);
    r.ratio_wx = norm_wx / r.env_wx;
    r.ratio_wxx = norm_wxx / r.env_wxx;
    r.sup_wxx_over_wx = sup_ratio;
    r.pointwise_bound = 4.0 / delta;
    r.pointwise_ok = sup_ratio <= r.pointwise_bound;
    r.sup_gap_inviscid = sup_gap;
    r.env_gap = delta / t * (std::log1p(t) + std::abs(std::log(delta)));
    r.ratio_gap = sup_gap / r.env_gap;
    return r;
}

WaveIdentityReport verify_wave_identities(const ApproxWave& aw, std::span<const double> xs,
                                          double t) {
    if (xs.empty()) {
        throw std::invalid_argument("verify_wave_identities: sample set must be nonempty");
    }
    if (!(t > 0.0)) {
        throw std::domain_error("verify_wave_identities: t must be > 0");
    }
    const double g = aw.cutoff.base.gas.gamma();
    const gasdyn::GasModel& gas = aw.cutoff.base.gas;
    const double delta = aw.profile.delta;

    double max_sigma_dev = 0.0;
    double max_identity = 0.0;
    for (const double x : xs) {
        const ApproxPoint ap = eval_approx_wave(aw, x, t);
        const double sig = gasdyn::riemann_invariants(gas, ap.rho, ap.u).sigma2;
        max_sigma_dev = std::max(max_sigma_dev, std::abs(sig - aw.sigma2) /
                                                    std::max(1.0, std::abs(aw.sigma2)));
        // Independent slope route: differentiate rho = s^(2/(gamma-1)) directly in w,
        // with s = (gamma-1)/(gamma+1) (w - Sigma_2).
        const WDeriv w = eval_w(aw.profile, x, t);
        const double s = (g - 1.0) / (g + 1.0) * (w.w - aw.sigma2);
        const double rho_x_direct =
            2.0 / (g + 1.0) * std::pow(s, (3.0 - g) / (g - 1.0)) * w.w_x;
        max_identity = std::max(max_identity, std::abs(ap.rho_x - rho_x_direct));
    }

    // Centered-difference consistency of the analytic derivatives, aggregated over a
    // subset of sample points and three step sizes.
    const std::size_t n_fd = std::min<std::size_t>(xs.size(), 16);
    const double h0 = delta / 64.0;
    double err_u[3] = {0.0, 0.0, 0.0};
    double err_rho[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n_fd; ++k) {
        const double x = xs[k * (xs.size() - 1) / std::max<std::size_t>(n_fd - 1, 1)];
        const ApproxPoint ap = eval_approx_wave(aw, x, t);
        for (int j = 0; j < 3; ++j) {
            const double h = h0 / (1 << j);
            const ApproxPoint ap_p = eval_approx_wave(aw, x + h, t);
            const ApproxPoint ap_m = eval_approx_wave(aw, x - h, t);
            err_u[j] += std::abs((ap_p.u - ap_m.u) / (2.0 * h) - ap.u_x);
            err_rho[j] += std::abs((ap_p.rho - ap_m.rho) / (2.0 * h) - ap.rho_x);
        }
    }

    // Sup distance to the cut-off fan at time t.
    const double lo = aw.profile.w_minus * t - 10.0 * delta - 1.0;
    const double hi = aw.profile.w_plus * t + 10.0 * delta + 1.0;
    double sup_gap = 0.0;
    const int ng = 20000;
    double hint = lo;
    for (int i = 0; i <= ng; ++i) {
        const double x = lo + (hi - lo) * i / ng;
        const ApproxPoint ap = eval_approx_wave(aw, x, t, hint);
        const gasdyn::WavePoint cut = gasdyn::eval_cutoff_wave(aw.cutoff, x / t);
        sup_gap = std::max({sup_gap, std::abs(ap.rho - cut.rho), std::abs(ap.u - cut.u)});
    }

    WaveIdentityReport r;
    r.max_sigma2_rel_dev = max_sigma_dev;
    r.max_slope_identity_res = max_identity;
    r.fd_order_u = 0.5 * std::log2(err_u[0] / err_u[2]);
    r.fd_order_rho = 0.5 * std::log2(err_rho[0] / err_rho[2]);
    r.sup_gap_cutoff = sup_gap;
    r.env_gap = delta / t * (std::log1p(t) + std::abs(std::log(delta)));
    r.ratio_gap = sup_gap / r.env_gap;
    return r;
}

}  // namespace vvlab::smoothwave
