#pragma once

#include <span>
#include <vector>

#include "vvlab/gasdyn.hpp"
#include "vvlab/nssolver.hpp"
#include "vvlab/smoothwave.hpp"

namespace vvlab::limitlab {

/// Configuration of a viscosity sweep: one solver run per epsilon, errors measured
/// against the exact vacuum fan at the sample times, sup taken over sample times.
struct SweepConfig {
    gasdyn::GasModel gas;
    gasdyn::RightState right;
    std::vector<double> epsilons;      // strictly decreasing, each in (0, 1)
    double h = 0.5;                    // error window start time, 0 < h < t_end
    double t_end = 2.0;
    std::vector<double> sample_times;  // defaults to 8 equally spaced times in [h, t_end]
    double c_mu = 1.0;
    int cells_per_delta = 50;
    int order = 2;
    double cfl = 0.45;
};

std::vector<double> default_sample_times(double h, double t_end, int count = 8);

/// Throws on malformed configs and on any infeasible schedule in the epsilon list.
void validate(const SweepConfig& config);

/// Domain sized so the perturbation never reaches the boundaries before t_end and the
/// grid covers the smoothed transition at t = 0; dx = delta / cells_per_delta.
nssolver::Grid case_grid(const smoothwave::ApproxWave& aw, double delta, double t_end,
                         int cells_per_delta);

struct PerturbationFields {
    std::vector<double> phi;  // rho - rho_bar at cell centers
    std::vector<double> psi;  // u - u_bar at cell centers
};

PerturbationFields perturbation_fields(const nssolver::FieldState& state,
                                       const nssolver::Grid& grid,
                                       const smoothwave::ApproxWave& aw);

/// Approximate wave sampled at cell centers at one time.
struct WaveRow {
    std::vector<double> rho;
    std::vector<double> u;
    std::vector<double> rho_x;
    std::vector<double> u_x;
    std::vector<double> u_xx;
};

WaveRow sample_wave(const smoothwave::ApproxWave& aw, const nssolver::Grid& grid, double t);

/// Instantaneous scaled-variable energy functionals. All y-integrals use the change of
/// variables y = x/eps: integral f dy = eps^-1 integral f dx, phi_y = eps phi_x.
struct EnergySample {
    double e_quadratic;           // int (rho_bar psi^2 + rho_bar^(gamma-2) phi^2) dy
    double e_gradient;            // int (phi_y^2 + psi_y^2) dy
    double dissipation_rate;      // int [psi_y^2 + rho_bar^(gamma-2) u_bar_y phi^2
                                  //      + rho_bar u_bar_y psi^2 + rho_bar^(gamma-3) phi_y^2
                                  //      + psi_yy^2 / rho_bar] dy
    double dissipation_rate_visc; // the int psi_y^2 dy component alone
};

EnergySample energy_functional(std::span<const double> phi, std::span<const double> psi,
                               std::span<const double> rho_bar, std::span<const double> u_bar_y,
                               double gamma, double dx, double epsilon);

struct EnergyReport {
    double e_quadratic;        // value at the peak-energy instant
    double e_gradient;         // value at the peak-energy instant
    double energy_peak;        // sup over sampled times of e_quadratic + e_gradient
    double dissipation_total;  // trapezoid accumulation in tau = t/eps
    double dissipation_visc;   // accumulated int int psi_y^2 dy dtau alone
    double bound_ratio;        // (energy_peak + dissipation_total) / (eps^(1/2-a) |ln eps|^(-1/2))
};

/// Accumulates the energy functionals over a run; add() after every accepted step.
class EnergyAccumulator {
public:
    EnergyAccumulator(const smoothwave::ApproxWave& aw, const nssolver::Grid& grid,
                      double epsilon);

    void add(const nssolver::FieldState& state);

    double peak_energy() const { return energy_peak_; }
    double dissipation_total() const { return dissipation_total_; }
    double phi_inf_max() const { return phi_inf_max_; }
    EnergyReport report(const gasdyn::GasModel& gas) const;

private:
    const smoothwave::ApproxWave* aw_;
    const nssolver::Grid* grid_;
    double epsilon_;
    bool has_prev_ = false;
    double prev_t_ = 0.0;
    double prev_rate_ = 0.0;
    double prev_rate_visc_ = 0.0;
    double energy_peak_ = 0.0;
    double peak_e_quadratic_ = 0.0;
    double peak_e_gradient_ = 0.0;
    double dissipation_total_ = 0.0;
    double dissipation_visc_ = 0.0;
    double phi_inf_max_ = 0.0;
};

struct SourceTerms {
    std::vector<double> f;  // u_bar_y phi + rho_bar_y psi
    std::vector<double> g;  // -u_bar_yy + rho psi u_bar_y + rho_bar_y [p'(rho) - (rho/rho_bar) p'(rho_bar)]
};

SourceTerms source_terms(const PerturbationFields& fields, const nssolver::Grid& grid,
                         const smoothwave::ApproxWave& aw, double epsilon, double t);

/// Residual of the perturbation mass equation phi_tau + rho psi_y + u phi_y + f = 0
/// on three solver snapshots (centered differences in tau and y); interior cells only.
std::vector<double> mass_equation_residual(const nssolver::FieldState& prev,
                                           const nssolver::FieldState& mid,
                                           const nssolver::FieldState& next,
                                           const nssolver::Grid& grid,
                                           const smoothwave::ApproxWave& aw, double epsilon);

struct CutoffGap {
    double rho;  // sup_xi |rho_mu - rho|
    double m;    // sup_xi |m_mu - m|
};

CutoffGap cutoff_gap(const gasdyn::CutoffWave& cw, double xi_lo, double xi_hi, int n);
CutoffGap cutoff_gap(const gasdyn::CutoffWave& cw, int n = 20001);

/// Error envelope eps^exponent |ln eps|^log_power with unit constant.
struct RateModel {
    double exponent;
    double log_power;
};

RateModel density_rate_model(const gasdyn::GasModel& gas);
RateModel momentum_rate_model(const gasdyn::GasModel& gas);
double rate_envelope(const RateModel& model, double epsilon);

struct SweepRecord {
    double epsilon = 0;
    double mu = 0;
    double delta = 0;
    double err_rho_inf = 0;  // sup over sample times of max_i |rho_i - rho_exact(x_i/t)|
    double err_m_inf = 0;
    double ratio_rho = 0;    // err_rho_inf / density envelope
    double ratio_m = 0;
    double energy_peak = 0;
    double dissipation_total = 0;
    double bound_ratio = 0;
    double min_rho = 0;      // run monitors
    double max_speed = 0;
    double phi_inf_max = 0;
    double runtime_s = 0;
};

struct CaseResult {
    SweepRecord record;
    nssolver::Grid grid;
    nssolver::FieldState final_state;
};

SweepRecord run_case(const SweepConfig& config, double epsilon);
CaseResult run_case_full(const SweepConfig& config, double epsilon);

struct RateFit {
    double slope;
    double intercept;
    double residual;                   // RMS residual of the log-log fit
    std::vector<double> ratio_series;  // err / envelope per epsilon
};

/// Least-squares fit of log(err) against log(eps); needs >= 3 points, all errors > 0.
RateFit fit_rate(std::span<const double> epsilons, std::span<const double> errors,
                 const RateModel& model);

}  // namespace vvlab::limitlab
