#pragma once

// Closed-form objects: the standing-wave family, critical mass, blow-up thresholds,
// the pseudoconformal map and the exact blow-up solutions.

#include <functional>
#include <optional>

#include "deltanls/types.hpp"

namespace deltanls {

struct BoundState {
  Dim d = Dim::One;
  double beta = 0.0;
  double sigma = 1.0;
  double omega = 0.0;
  double q_amp = 0.0;  // the profile is q_amp * G_omega
};

/// Throws ConstraintError for an inadmissible (beta, omega) pair or sigma <= 0.
BoundState bound_state(Dim d, double beta, double sigma, double omega);

/// u(x) = q_amp G_omega(x); singular at x = 0 for d = 2, 3.
double bound_state_profile(const BoundState& s, double x);

/// The charge of the bound state: u(0) in d = 1, q_amp in d = 2, 3.
double bound_state_charge(const BoundState& s);

double bound_mass(const BoundState& s);
double bound_energy(const BoundState& s);

/// L2-critical mass for sigma = 1; none in d = 2.
std::optional<double> critical_mass(Dim d, double beta);

/// Infimum of the bound-state energies over the admissible frequencies (beta < 0).
double energy_threshold(Dim d, double beta, double sigma);

/// The d = 2 frequency 4 e^{-2 gamma} separating the beta > 0 and beta < 0 branches.
double two_dim_frequency_threshold();

/// sigma_c = (sigma + 1) / (2 sigma) and the rate exponent (1 - sigma_c) / 2.
double sigma_c(double sigma);
double blowup_rate_exponent(double sigma);

/// Pseudoconformal transform of a solution psi(s, x) (d = 1, 3, sigma = 1):
/// (T - t)^{-d/2} exp(-i |x|^2 / (4 (T - t))) psi(1/(T - t), x/(T - t)).
using SolutionFn = std::function<Complex(double t, double x)>;
Complex pseudoconformal_value(const SolutionFn& psi, Dim d, double T, double t, double x);
SolutionFn pseudoconformal_map(SolutionFn psi, Dim d, double T);

/// The explicit blow-up solution built from the sigma = 1 bound state; x is |x| for d = 3.
Complex exact_blowup_solution(Dim d, double beta, double omega, double theta, double T_star, double t, double x);
/// Its charge, (T* - t)^{-1/2} e^{i omega/(T* - t) + i theta} times the bound-state charge.
Complex exact_blowup_charge(Dim d, double beta, double omega, double theta, double T_star, double t);

}  // namespace deltanls
