#include "vvlab/gasdyn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vvlab::gasdyn {

namespace {

void require_nonnegative_density(double rho, const char* where) {
    if (!(rho >= 0.0)) {
        throw std::domain_error(std::string(where) + ": density must be >= 0, got " +
                                std::to_string(rho));
    }
}

}  // namespace

GasModel::GasModel(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0)) {
        throw std::domain_error("GasModel: gamma must be > 1, got " + std::to_string(gamma));
    }
}

double GasModel::pressure(double rho) const {
    require_nonnegative_density(rho, "pressure");
    return std::pow(rho, gamma_) / gamma_;
}

double GasModel::pressure_deriv(double rho) const {
    require_nonnegative_density(rho, "pressure_deriv");
    return std::pow(rho, gamma_ - 1.0);
}

double GasModel::sound_speed(double rho) const {
    require_nonnegative_density(rho, "sound_speed");
    return std::pow(rho, 0.5 * (gamma_ - 1.0));
}

CharSpeeds char_speeds(const GasModel& gas, double rho, double u) {
    if (!(rho > 0.0)) {
        throw std::domain_error("char_speeds: density must be > 0 (speeds coincide at vacuum)");
    }
    const double c = gas.sound_speed(rho);
    return {u - c, u + c};
}

RiemannInvariants riemann_invariants(const GasModel& gas, double rho, double u) {
    require_nonnegative_density(rho, "riemann_invariants");
    const double k = gas.riemann_coeff() * gas.sound_speed(rho);
    return {u + k, u - k};
}

ExactWave build_exact_wave(const GasModel& gas, const RightState& right) {
    if (!(right.rho_plus > 0.0)) {
        throw std::domain_error("build_exact_wave: rho_plus must be > 0");
    }
    const double sigma2 = riemann_invariants(gas, right.rho_plus, right.u_plus).sigma2;
    const double lambda2_plus = right.u_plus + gas.sound_speed(right.rho_plus);
    return {gas, right, sigma2, sigma2, lambda2_plus};
}

WavePoint eval_exact_wave(const ExactWave& wave, double xi) {
    if (xi < wave.u_minus) {
        return {0.0, wave.u_minus, 0.0};
    }
    if (xi > wave.lambda2_plus) {
        const double rho = wave.right.rho_plus;
        const double u = wave.right.u_plus;
        return {rho, u, rho * u};
    }
    // Inside the fan lambda_2(rho, u) = xi with Sigma_2 constant; eliminating u gives
    // rho^((gamma-1)/2) = (gamma-1)/(gamma+1) * (xi - Sigma_2).
    const double g = wave.gas.gamma();
    const double s = (g - 1.0) / (g + 1.0) * (xi - wave.sigma2);
    const double rho = std::pow(s, 2.0 / (g - 1.0));
    const double u = xi - s;
    return {rho, u, rho > 0.0 ? rho * u : 0.0};
}

double u_mu(const ExactWave& wave, double mu) {
    if (!(mu > 0.0) || !(mu < wave.right.rho_plus)) {
        throw std::domain_error("u_mu: cut level must lie in (0, rho_plus)");
    }
    return wave.sigma2 + wave.gas.riemann_coeff() * wave.gas.sound_speed(mu);
}

CutoffWave build_cutoff_wave(const ExactWave& wave, double mu) {
    if (!(mu > 0.0) || !(mu <= 0.5 * wave.right.rho_plus)) {
        throw std::domain_error("build_cutoff_wave: cut level must lie in (0, rho_plus/2]");
    }
    const double umu = u_mu(wave, mu);
    const double lambda2_minus = umu + wave.gas.sound_speed(mu);
    return {wave, mu, umu, lambda2_minus};
}

WavePoint eval_cutoff_wave(const CutoffWave& wave, double xi) {
    if (xi < wave.lambda2_minus) {
        return {wave.mu, wave.u_mu, wave.mu * wave.u_mu};
    }
    return eval_exact_wave(wave.base, xi);
}

}  // namespace vvlab::gasdyn
