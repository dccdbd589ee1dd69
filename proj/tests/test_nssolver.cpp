#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "support/sampling.hpp"
#include "vvlab/nssolver.hpp"

using namespace vvlab;
using gasdyn::GasModel;
using nssolver::FieldState;
using nssolver::Grid;
using nssolver::SolverConfig;

namespace {

smoothwave::ApproxWave make_wave(double gamma, double rho_plus, double u_plus, double mu,
                                 double delta) {
    const auto exact = gasdyn::build_exact_wave(GasModel(gamma), {rho_plus, u_plus});
    return smoothwave::build_approx_wave(gasdyn::build_cutoff_wave(exact, mu), delta);
}

// Test-side quadrature oracle (composite Simpson over fixed panels).
template <typename F>
double simpson_oracle(const F& f, double a, double b, int panels, int levels) {
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * i / panels;
        const double pb = a + (b - a) * (i + 1) / panels;
        const int n = 1 << levels;
        const double h = (pb - pa) / (2 * n);
        double s = f(pa) + f(pb);
        for (int j = 1; j < 2 * n; ++j) {
            s += f(pa + j * h) * ((j % 2 == 1) ? 4.0 : 2.0);
        }
        total += s * h / 3.0;
    }
    return total;
}

bool states_identical(const FieldState& a, const FieldState& b) {
    return a.t == b.t && a.boundary_mass_in == b.boundary_mass_in &&
           std::memcmp(a.rho.data(), b.rho.data(), a.rho.size() * sizeof(double)) == 0 &&
           std::memcmp(a.m.data(), b.m.data(), a.m.size() * sizeof(double)) == 0;
}

double sup_distance_to_fan(const FieldState& s, const Grid& g, const gasdyn::ExactWave& w) {
    double err = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
        err = std::max(err,
                       std::abs(s.rho[i] - gasdyn::eval_exact_wave(w, g.center(i) / s.t).rho));
    }
    return err;
}

}  // namespace

TEST_CASE("grid and config validation") {
    const Grid g = nssolver::make_grid(0.0, 1.0, 64);
    CHECK(g.dx == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(g.center(0) == doctest::Approx(g.dx / 2).epsilon(1e-15));
    CHECK_THROWS_AS(nssolver::make_grid(1.0, 0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(nssolver::make_grid(0.0, 1.0, 8), std::invalid_argument);

    SolverConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(nssolver::validate(bad), std::invalid_argument);
    bad.epsilon = 1e-3;
    bad.cfl = 0.95;
    CHECK_THROWS_AS(nssolver::validate(bad), std::invalid_argument);
    bad.cfl = 0.45;
    bad.order = 3;
    CHECK_THROWS_AS(nssolver::validate(bad), std::invalid_argument);
}

TEST_CASE("initialization from the wave") {
    const auto aw = make_wave(2.0, 2.0, 0.5, 0.7, 0.3);
    const Grid g = nssolver::make_grid(-20.0, 20.0, 2667);  // dx ~ delta/20
    const FieldState s = nssolver::init_from_wave(aw, g);
    CHECK(s.t == 0.0);

    // constant right region
    for (int i = g.n_cells - 20; i < g.n_cells; ++i) {
        CHECK(std::abs(s.rho[i] - 2.0) <= 1e-14 * 2.0);
        CHECK(std::abs(s.m[i] - 1.0) <= 1e-14);
    }
    // left of the transition: the cut state
    const double mu = aw.cutoff.mu;
    const double mu_m = aw.cutoff.mu * aw.cutoff.u_mu;
    for (int i = 0; i < 20; ++i) {
        CHECK(std::abs(s.rho[i] - mu) <= 1e-12);
        CHECK(std::abs(s.m[i] - mu_m) <= 1e-12);
    }

    // total mass against an independent fine quadrature of rho_bar(., 0)
    const double mass = nssolver::mass_total(s, g);
    const double oracle = simpson_oracle(
        [&](double x) { return smoothwave::eval_approx_wave(aw, x, 0.0).rho; }, -20.0, 20.0,
        200, 5);
    CHECK(mass == doctest::Approx(oracle).epsilon(1e-12));

    // doubling the resolution leaves the mass unchanged
    const Grid g2 = nssolver::make_grid(-20.0, 20.0, 2 * 2667);
    CHECK(nssolver::mass_total(nssolver::init_from_wave(aw, g2), g2) ==
          doctest::Approx(mass).epsilon(1e-12));

    // grid must cover the smoothed transition
    CHECK_THROWS_AS(nssolver::init_from_wave(aw, nssolver::make_grid(-5.0, 20.0, 100)),
                    std::invalid_argument);
}

TEST_CASE("time step formula") {
    const auto aw = make_wave(3.0, 1.0, 0.0, 0.1, 0.2);
    const Grid g = nssolver::make_grid(0.0, 1.0, 16);
    FieldState s;
    s.rho = std::vector<double>(16, 0.5);
    s.m = std::vector<double>(16, 0.25);  // u = 0.5, c = 0.5 for gamma = 3
    SolverConfig cfg;
    cfg.epsilon = 2e-3;
    cfg.cfl = 0.4;
    const double dt = nssolver::next_dt(s, g, cfg, aw.cutoff.base.gas);
    const double dx = g.dx;
    const double expected = 0.4 * std::min(dx / 1.0, dx * dx * 0.5 / (2.0 * 2e-3));
    CHECK(dt == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("constant state is preserved exactly") {
    // grid beyond the transition: ghosts saturate to the right state bitwise
    const auto aw = make_wave(3.0, 1.0, 0.0, 0.25, 0.1);
    const Grid g = nssolver::make_grid(2.5, 6.5, 64);
    FieldState s;
    s.rho = std::vector<double>(64, 1.0);
    s.m = std::vector<double>(64, 0.0);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;

    for (int order : {1, 2}) {
        cfg.order = order;
        FieldState s1 = nssolver::step(s, g, cfg, aw);
        CHECK(s1.t > 0.0);
        double change = 0.0;
        for (int i = 0; i < 64; ++i) {
            change = std::max({change, std::abs(s1.rho[i] - 1.0), std::abs(s1.m[i])});
        }
        CHECK(change <= 1e-13);
    }
}

TEST_CASE("mass bookkeeping closes over many steps") {
    const auto aw = make_wave(2.0, 2.0, 1.0, 0.8, 0.3);
    const Grid g = nssolver::make_grid(-18.6, 19.2, 1260);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    FieldState s = nssolver::init_from_wave(aw, g);
    const double mass0 = nssolver::mass_total(s, g);
    for (int k = 0; k < 200; ++k) {
        s = nssolver::step(s, g, cfg, aw);
    }
    const double mass1 = nssolver::mass_total(s, g);
    CHECK(std::abs(mass1 - mass0 - s.boundary_mass_in) <= 1e-12 * mass0);
    // runtime monitors
    CHECK(s.min_rho_seen >= 0.5 * aw.cutoff.mu);
    CHECK(s.max_speed_seen > 0.0);
}

TEST_CASE("advance_to lands exactly and is deterministic") {
    const auto aw = make_wave(2.0, 2.0, 1.0, 0.8, 0.3);
    const Grid g = nssolver::make_grid(-18.6, 19.2, 630);
    SolverConfig cfg;
    cfg.epsilon = 2e-3;
    const FieldState s0 = nssolver::init_from_wave(aw, g);

    // identity advance
    const FieldState same = nssolver::advance_to(s0, g, cfg, aw, s0.t);
    CHECK(states_identical(same, s0));

    // exact landing
    const FieldState a = nssolver::advance_to(s0, g, cfg, aw, 0.1234);
    CHECK(a.t == 0.1234);

    // bit-identical repetition
    const FieldState b = nssolver::advance_to(s0, g, cfg, aw, 0.1234);
    CHECK(states_identical(a, b));

    // two half-advances through a landing point reproduce the direct path on a
    // constant state (partial steps change nothing there)
    const auto aw3 = make_wave(3.0, 1.0, 0.0, 0.25, 0.1);
    const Grid gc = nssolver::make_grid(2.5, 6.5, 64);
    FieldState c0;
    c0.rho = std::vector<double>(64, 1.0);
    c0.m = std::vector<double>(64, 0.0);
    FieldState c4 = c0;
    for (int k = 0; k < 4; ++k) {
        c4 = nssolver::step(c4, gc, cfg, aw3);
    }
    FieldState c8 = c4;
    for (int k = 0; k < 4; ++k) {
        c8 = nssolver::step(c8, gc, cfg, aw3);
    }
    const FieldState half = nssolver::advance_to(c0, gc, cfg, aw3, c4.t);
    CHECK(half.t == c4.t);
    const FieldState full = nssolver::advance_to(half, gc, cfg, aw3, c8.t);
    const FieldState direct = nssolver::advance_to(c0, gc, cfg, aw3, c8.t);
    CHECK(states_identical(full, direct));
}

TEST_CASE("self-convergence orders") {
    const auto aw = make_wave(2.0, 2.0, 1.0, 0.8, 0.3);
    const double t_end = 0.25;
    auto run = [&](int n, int order) {
        const Grid g = nssolver::make_grid(-18.6, 19.2, n);
        SolverConfig cfg;
        cfg.epsilon = 1e-3;
        cfg.order = order;
        return nssolver::advance_to(nssolver::init_from_wave(aw, g), g, cfg, aw, t_end);
    };
    auto l1_diff_after_restrict = [&](const FieldState& fine, const FieldState& coarse,
                                      double dx_coarse) {
        double e = 0.0;
        for (std::size_t i = 0; i < coarse.rho.size(); ++i) {
            const double r = 0.5 * (fine.rho[2 * i] + fine.rho[2 * i + 1]);
            const double m = 0.5 * (fine.m[2 * i] + fine.m[2 * i + 1]);
            e += (std::abs(r - coarse.rho[i]) + std::abs(m - coarse.m[i])) * dx_coarse;
        }
        return e;
    };

    for (int order : {1, 2}) {
        CAPTURE(order);
        const FieldState c = run(1260, order);
        const FieldState f = run(2520, order);
        const FieldState ff = run(5040, order);
        const double e1 = l1_diff_after_restrict(f, c, 37.8 / 1260);
        const double e2 = l1_diff_after_restrict(ff, f, 37.8 / 2520);
        const double observed = std::log2(e1 / e2);
        CAPTURE(observed);
        if (order == 2) {
            CHECK(observed >= 1.8);
            CHECK(observed <= 2.2);
        } else {
            CHECK(observed >= 0.8);
            CHECK(observed <= 1.2);
        }
    }
}

TEST_CASE("sup distance to the fan shrinks with viscosity") {
    const auto exact = gasdyn::build_exact_wave(GasModel(3.0), {1.0, 0.0});
    const auto aw = smoothwave::build_approx_wave(gasdyn::build_cutoff_wave(exact, 0.1), 0.2);
    const Grid g = nssolver::make_grid(-12.05, 12.1, 2415);
    auto err_at = [&](double eps) {
        SolverConfig cfg;
        cfg.epsilon = eps;
        const FieldState s =
            nssolver::advance_to(nssolver::init_from_wave(aw, g), g, cfg, aw, 1.0);
        return sup_distance_to_fan(s, g, exact);
    };
    const double e_coarse = err_at(2e-3);
    const double e_fine = err_at(1e-3);
    CHECK(e_fine < e_coarse);
    CHECK(e_fine > 0.0);
}

TEST_CASE("vacuum breach and stiffness errors") {
    const auto aw = make_wave(3.0, 1.0, 0.0, 0.25, 0.1);
    const Grid g = nssolver::make_grid(2.5, 6.5, 64);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;

    FieldState bad;
    bad.rho = std::vector<double>(64, 1.0);
    bad.m = std::vector<double>(64, 0.0);
    bad.rho[3] = -0.1;
    try {
        (void)nssolver::step(bad, g, cfg, aw);
        FAIL("expected a vacuum breach");
    } catch (const nssolver::vacuum_breach_error& e) {
        CHECK(e.cell() == 3);
        CHECK(e.time() == 0.0);
    }

    FieldState ok;
    ok.rho = std::vector<double>(64, 1.0);
    ok.m = std::vector<double>(64, 0.0);
    SolverConfig stiff = cfg;
    stiff.epsilon = 1e12;
    CHECK_THROWS_AS((void)nssolver::step(ok, g, stiff, aw), nssolver::stiffness_error);
}

TEST_CASE("mass of a uniform state") {
    const Grid g = nssolver::make_grid(0.0, 1.0, 64);
    FieldState s;
    s.rho = std::vector<double>(64, 1.0);
    s.m = std::vector<double>(64, 0.0);
    CHECK(nssolver::mass_total(s, g) == doctest::Approx(1.0).epsilon(1e-15));
}
