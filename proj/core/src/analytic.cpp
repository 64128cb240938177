#include "deltanls/analytic.hpp"

#include <cmath>

#include "deltanls/linear_delta.hpp"

namespace deltanls {

double two_dim_frequency_threshold() { return 4.0 * std::exp(-2.0 * kEulerGamma); }

BoundState bound_state(Dim d, double beta, double sigma, double omega) {
  if (!(sigma > 0.0)) throw ConstraintError("bound_state: sigma must be positive");
  if (!(omega > 0.0)) throw ConstraintError("bound_state: omega must be positive");
  if (beta == 0.0) throw ConstraintError("bound_state: beta must be nonzero");
  double base = 0.0;
  switch (d) {
    case Dim::One:
      if (beta > 0.0) throw ConstraintError("bound_state: d = 1 requires beta < 0");
      base = std::pow(2.0, 2.0 * sigma + 1.0) * std::pow(omega, sigma + 0.5) / (-beta);
      break;
    case Dim::Two: {
      const double w0 = two_dim_frequency_threshold();
      if (beta > 0.0 && !(omega < w0)) {
        throw ConstraintError("bound_state: d = 2, beta > 0 requires omega in (0, 4 e^{-2 gamma})");
      }
      if (beta < 0.0 && !(omega > w0)) {
        throw ConstraintError("bound_state: d = 2, beta < 0 requires omega > 4 e^{-2 gamma}");
      }
      base = (std::log(0.5 * std::sqrt(omega)) + kEulerGamma) / (-2.0 * kPi * beta);
      break;
    }
    case Dim::Three:
      if (beta > 0.0) throw ConstraintError("bound_state: d = 3 requires beta < 0");
      base = std::sqrt(omega) / (-4.0 * kPi * beta);
      break;
  }
  return BoundState{d, beta, sigma, omega, std::pow(base, 1.0 / (2.0 * sigma))};
}

double bound_state_profile(const BoundState& s, double x) { return s.q_amp * green(s.d, s.omega, x); }

double bound_state_charge(const BoundState& s) {
  return s.d == Dim::One ? s.q_amp / (2.0 * std::sqrt(s.omega)) : s.q_amp;
}

double bound_mass(const BoundState& s) { return s.q_amp * s.q_amp * green_norm_sq(s.d, s.omega); }

double bound_energy(const BoundState& s) {
  const double q2 = s.q_amp * s.q_amp;
  if (s.d == Dim::One) {
    const double c = bound_state_charge(s);
    // ||G'_omega||^2 = 1 / (4 sqrt(omega))
    return 0.5 * q2 / (4.0 * std::sqrt(s.omega)) +
           s.beta * std::pow(c, 2.0 * s.sigma + 2.0) / (2.0 * s.sigma + 2.0);
  }
  // decomposition at lambda = omega has a vanishing regular part
  const double alpha = s.beta * std::pow(s.q_amp, 2.0 * s.sigma) / (s.sigma + 1.0);
  return -0.5 * s.omega * q2 * green_norm_sq(s.d, s.omega) + 0.5 * theta(s.d, s.omega, alpha) * q2;
}

std::optional<double> critical_mass(Dim d, double beta) {
  if (d == Dim::Two) return std::nullopt;
  if (!(beta < 0.0)) throw ConstraintError("critical_mass: beta must be negative");
  if (d == Dim::One) return -2.0 / beta;
  return 1.0 / (-32.0 * kPi * kPi * beta);
}

double energy_threshold(Dim d, double beta, double sigma) {
  if (!(beta < 0.0)) throw ConstraintError("energy_threshold: only meaningful for beta < 0");
  if (!(sigma > 0.0)) throw ConstraintError("energy_threshold: sigma must be positive");
  if (d != Dim::Two) return 0.0;
  return -sigma / (4.0 * kPi * (sigma + 1.0) * std::pow(-4.0 * kPi * sigma * beta, 1.0 / sigma));
}

double sigma_c(double sigma) {
  if (!(sigma > 0.0)) throw ConstraintError("sigma_c: sigma must be positive");
  return (sigma + 1.0) / (2.0 * sigma);
}

double blowup_rate_exponent(double sigma) { return 0.5 * (1.0 - sigma_c(sigma)); }

Complex pseudoconformal_value(const SolutionFn& psi, Dim d, double T, double t, double x) {
  if (d == Dim::Two) throw ConstraintError("pseudoconformal map: only d = 1, 3");
  if (!(T > 0.0)) throw ConstraintError("pseudoconformal map: T must be positive");
  const double tau = T - t;
  if (tau == 0.0) throw DomainError("pseudoconformal map: evaluation at t = T");
  const double scale = std::pow(std::abs(tau), -0.5 * to_int(d));
  // for t > T the amplitude keeps the principal branch of (T - t)^{-d/2}
  const Complex amp = tau > 0.0 ? Complex(scale) : scale * std::polar(1.0, 0.5 * kPi * to_int(d));
  return amp * std::polar(1.0, -x * x / (4.0 * tau)) * psi(1.0 / tau, x / tau);
}

SolutionFn pseudoconformal_map(SolutionFn psi, Dim d, double T) {
  return [psi = std::move(psi), d, T](double t, double x) { return pseudoconformal_value(psi, d, T, t, x); };
}

Complex exact_blowup_solution(Dim d, double beta, double omega, double theta, double T_star, double t, double x) {
  if (d == Dim::Two) throw ConstraintError("exact_blowup_solution: only d = 1, 3");
  if (!(t < T_star)) throw DomainError("exact_blowup_solution: requires t < T*");
  const BoundState s = bound_state(d, beta, 1.0, omega);
  const double tau = T_star - t;
  const double phase = -x * x / (4.0 * tau) + omega / tau + theta;
  return std::pow(tau, -0.5 * to_int(d)) * std::polar(1.0, phase) * bound_state_profile(s, x / tau);
}

Complex exact_blowup_charge(Dim d, double beta, double omega, double theta, double T_star, double t) {
  if (d == Dim::Two) throw ConstraintError("exact_blowup_charge: only d = 1, 3");
  if (!(t < T_star)) throw DomainError("exact_blowup_charge: requires t < T*");
  const BoundState s = bound_state(d, beta, 1.0, omega);
  const double tau = T_star - t;
  return std::polar(bound_state_charge(s) / std::sqrt(tau), omega / tau + theta);
}

}  // namespace deltanls
