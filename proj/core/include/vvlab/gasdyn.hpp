#pragma once

namespace vvlab::gasdyn {

/// Polytropic gas with pressure law p(rho) = rho^gamma / gamma, gamma > 1.
class GasModel {
public:
    explicit GasModel(double gamma);

    double gamma() const { return gamma_; }

    /// p(rho) = rho^gamma / gamma for rho >= 0.
    double pressure(double rho) const;

    /// p'(rho) = rho^(gamma - 1).
    double pressure_deriv(double rho) const;

    /// sqrt(p'(rho)) = rho^((gamma - 1)/2), the isentropic sound speed.
    double sound_speed(double rho) const;

    /// 2/(gamma - 1), coefficient of the Riemann-invariant integral of sqrt(p')/rho.
    double riemann_coeff() const { return 2.0 / (gamma_ - 1.0); }

private:
    double gamma_;
};

/// Constant state on the right side of the fan.
struct RightState {
    double rho_plus;
    double u_plus;
};

struct CharSpeeds {
    double lambda1;  // u - sqrt(p')
    double lambda2;  // u + sqrt(p')
};

/// Characteristic speeds of the isentropic Euler system; requires rho > 0
/// (the two speeds coincide at vacuum).
CharSpeeds char_speeds(const GasModel& gas, double rho, double u);

struct RiemannInvariants {
    double sigma1;  // u + (2/(gamma-1)) rho^((gamma-1)/2)
    double sigma2;  // u - (2/(gamma-1)) rho^((gamma-1)/2)
};

/// Riemann invariants of both families; defined for rho >= 0 (both equal u at vacuum).
RiemannInvariants riemann_invariants(const GasModel& gas, double rho, double u);

struct WavePoint {
    double rho;
    double u;
    double m;  // momentum rho*u, set to 0 where rho = 0
};

/// Self-similar 2-rarefaction fan connecting vacuum (on the left) to (rho_plus, u_plus).
struct ExactWave {
    GasModel gas;
    RightState right;
    double u_minus;       // fluid speed at the vacuum edge, = Sigma_2(rho_plus, u_plus)
    double sigma2;        // 2-Riemann invariant, constant through the fan
    double lambda2_plus;  // fan head speed lambda_2(rho_plus, u_plus)
};

ExactWave build_exact_wave(const GasModel& gas, const RightState& right);

/// Evaluate the fan at xi = x/t. Vacuum side reports u = u_minus and m = 0.
WavePoint eval_exact_wave(const ExactWave& wave, double xi);

/// Speed of the state at density mu on the 2-rarefaction curve through (rho_plus, u_plus):
/// u_mu = Sigma_2 + (2/(gamma-1)) mu^((gamma-1)/2). Requires 0 < mu < rho_plus.
double u_mu(const ExactWave& wave, double mu);

/// The fan truncated along the wave curve at density level mu: the vacuum region is
/// replaced by the constant state (mu, u_mu).
struct CutoffWave {
    ExactWave base;
    double mu;
    double u_mu;
    double lambda2_minus;  // lambda_2(mu, u_mu), left edge of the truncated fan
};

/// Requires 0 < mu <= rho_plus/2 so the cut-off wave is a strict sub-fan.
CutoffWave build_cutoff_wave(const ExactWave& wave, double mu);

WavePoint eval_cutoff_wave(const CutoffWave& wave, double xi);

}  // namespace vvlab::gasdyn
