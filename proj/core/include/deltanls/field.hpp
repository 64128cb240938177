#pragma once

// Duhamel reconstruction of the wave function from a charge trajectory,
//   psi(t, x) = (U(t) psi0)(x) + i int_0^t U(t - s, x) kappa(alpha(q(s))) q(s) ds,
// and the observables built on it. The memory integral uses the same piecewise-linear
// interpolant as the charge solver, integrated in closed form against the propagator.

#include <cstddef>
#include <utility>
#include <vector>

#include "deltanls/charge.hpp"

namespace deltanls {

/// Quadrature nodes and weights on the line (d = 1) or the half-line r > 0 (d = 2, 3).
/// Weights integrate in x or r only; the radial measure is applied by the observables.
struct SpatialGrid {
  Dim d = Dim::One;
  std::vector<double> points;
  std::vector<double> weights;
  /// Half-width L of a line grid covering [-L, L] (d = 1) or the outer radius (d = 3). When
  /// positive, the observables add the radiated far field beyond L (FieldSnapshot::radiation).
  double extent = 0.0;
};

/// Composite Gauss-Legendre on [-extent, extent] split at 0 (d = 1), or on (0, extent]
/// with dyadic panels accumulating at r = 0 (d = 2, 3).
SpatialGrid gauss_grid(Dim d, double extent, int panels = 64, int order = 12);
/// Equispaced points with trapezoid weights; for d = 2, 3 the grid starts at extent / n.
SpatialGrid uniform_grid(Dim d, double extent, std::size_t n);

struct FieldSnapshot {
  double t = 0.0;
  Dim d = Dim::One;
  SpatialGrid grid;
  std::vector<Complex> values;
  std::vector<Complex> gradients;  // d/dx (d = 1) or d/dr; empty unless requested
  Complex charge;
  double lambda = 1.0;
  /// Strength of the far field radiated from the origin at t = 0+. A datum that does not satisfy
  /// the coupling's boundary condition sheds a chirp e^{i|x|^2/4t} whose energy tail decays only
  /// like 1/L, so no practical window captures it. d = 1: the derivative-jump mismatch
  /// g(0) + [psi0'](0), giving |psi'|^2 ~ t |c|^2 / (pi x^2). d = 3: the sqrt(t) coefficient of
  /// q(t) - q(0), giving |grad psi|^2 4 pi r^2 ~ t |c|^2 / (4 pi r^2). Zero in d = 2.
  Complex radiation;
};

struct ReconstructOptions {
  bool gradients = true;
  unsigned threads = 1;  // 0: hardware concurrency
  double lambda = 1.0;
};

/// Snapshot at the grid time t_n = n h. Throws DomainError past the resolved part of a
/// truncated trajectory and for r = 0 in d = 2, 3.
FieldSnapshot reconstruct(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n,
                          const SpatialGrid& grid, const ReconstructOptions& options = {});
/// Same with t given; t must lie on the trajectory grid.
FieldSnapshot reconstruct(const ChargeTrajectory& traj, const InitialDatum& datum, double t,
                          const SpatialGrid& grid, const ReconstructOptions& options = {});

/// Single-point value and gradient.
Complex field_value(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n, double x);
Complex field_gradient(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n, double x);

/// Strength entering the energy: beta |q|^{2 sigma} / (sigma + 1) (nonlinear) or alpha (linear).
double energy_alpha(const ChargeTrajectory& traj, Complex q);

double mass(const FieldSnapshot& snap);
/// Needs gradients. d = 1: 1/2 ||psi'||^2 + beta |q|^{2 sigma + 2} / (2 sigma + 2);
/// d = 2, 3: 1/2 ||grad phi||^2 + lambda/2 (||phi||^2 - ||psi||^2) + 1/2 theta_lambda(alpha) |q|^2
/// with psi = phi + q G_lambda. The linear case replaces the coupling term by alpha |q|^2 / 2.
double energy(const ChargeTrajectory& traj, const FieldSnapshot& snap, double lambda);
double energy(const ChargeTrajectory& traj, const FieldSnapshot& snap);
double moment_of_inertia(const FieldSnapshot& snap);

/// Second derivative of the moment of inertia: 16 E0 + g(|q|^2), g the point-interaction remainder.
/// With H = -Laplacian the free part is 8 ||grad psi||^2, i.e. 16 times the kinetic energy as
/// normalized in energy(); a coefficient 8 on E0 is off by a factor 2 (checked against free
/// Gaussians and finite differences of the reconstructed moment in d = 1, 3).
double virial_rhs(double E0, Complex q, double beta, double sigma, Dim d);

struct RateFit {
  double T_est = 0.0;
  double exponent = 0.0;
  double rms_residual = 0.0;  // of log|q|
  std::size_t samples = 0;
};

/// Least-squares fit of log|q| = c + p log(T - t) over t in window, with T free.
/// Throws NumericalError when |q| is not strictly increasing on the window.
RateFit blowup_rate_fit(const ChargeTrajectory& traj, std::pair<double, double> window);

/// d = 1, beta = -1, sigma > 1: ||psi0||^{(1 - sigma_c)/sigma_c} ||psi0'|| normalized by the same
/// quantity for the omega = 1 bound state.
double dichotomy_eta(const InitialDatum& datum, const DeltaModel& model);

/// ||psi0'||^2 for a d = 1 datum.
double datum_gradient_norm_sq(const InitialDatum& datum);

}  // namespace deltanls
