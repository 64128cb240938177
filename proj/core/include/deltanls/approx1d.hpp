#pragma once

// Split-step Fourier solver for the 1-d NLS with a shrinking concentrated nonlinear potential
//   i psi_t = -psi_xx + (1/eps) V(x/eps) |psi|^{2 sigma} psi
// on a periodic box, and the harness comparing it with the point-interaction solution of
// strength beta = int V.

#include <cstddef>
#include <vector>

#include "deltanls/datum.hpp"

namespace deltanls {

class PotentialProfile {
 public:
  enum class Kind { Box, Gaussian };

  /// beta / (2 a) on [-a, a].
  static PotentialProfile box(double beta, double a = 1.0);
  /// beta exp(-x^2) / sqrt(pi).
  static PotentialProfile gaussian(double beta);

  Kind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double operator()(double x) const;
  /// (1/eps) V(x/eps)
  double scaled(double x, double eps) const { return (*this)(x / eps) / eps; }
  /// int |x| |V(x)| dx
  double moment() const;
  /// Half-width of the region carrying all but ~1e-16 of int |V|.
  double support_radius() const;

 private:
  PotentialProfile(Kind k, double beta, double a) : kind_(k), beta_(beta), a_(a) {}
  Kind kind_;
  double beta_;
  double a_;
};

/// Periodic grid x_k = -L + k (2L / N), k = 0..N-1.
struct PeriodicGrid {
  double half_width = 20.0;
  std::size_t n = 4096;

  double dx() const { return 2.0 * half_width / static_cast<double>(n); }
  double x(std::size_t k) const { return -half_width + static_cast<double>(k) * dx(); }
};

struct SplitStepFrame {
  double t = 0.0;
  std::vector<Complex> values;
};

struct SplitStepOptions {
  double dt = 1e-4;
  std::size_t frames = 10;  // equally spaced output times after t = 0
  /// Test hook: drop the potential entirely.
  bool free_only = false;
};

/// Strang splitting: half potential step (exact, |psi| is invariant), full kinetic step in
/// Fourier space, half potential step. Returns frames at t = 0 and at `frames` equally spaced times up to T (T / dt must be an integer
/// multiple of frames). Throws ConstraintError when the potential core is under-resolved.
std::vector<SplitStepFrame> splitstep_solve(const PotentialProfile& V, double eps, double sigma,
                                            const InitialDatum& psi0, double T, const PeriodicGrid& grid,
                                            const SplitStepOptions& options = {});

double periodic_mass(const std::vector<Complex>& values, const PeriodicGrid& grid);
/// 1/2 ||psi'||^2 + 1/(2 sigma + 2) int (1/eps) V(x/eps) |psi|^{2 sigma + 2}
double regularized_energy(const std::vector<Complex>& values, const PeriodicGrid& grid, const PotentialProfile& V,
                          double eps, double sigma);
/// Spectral derivative on the periodic grid.
std::vector<Complex> spectral_derivative(const std::vector<Complex>& values, const PeriodicGrid& grid);

struct ApproxRow {
  double eps = 0.0;
  double h1_error = 0.0;  // sup over the output frames
  double runtime_s = 0.0;
};

struct CompareOptions {
  PeriodicGrid grid{};
  double dt = 1e-4;
  double charge_h = 1e-3;  // time step of the point-interaction solve
  std::size_t frames = 10;
  unsigned threads = 1;
  /// Test hook: sigma = 0 compares against the linear solve with alpha = beta.
};

/// sup_t ||psi_eps(t) - psi(t)||_{H^1} per eps. The point-interaction solution comes from the charge
/// solver and Duhamel reconstruction on the same grid; its derivative is analytic, that of
/// psi_eps spectral.
std::vector<ApproxRow> compare_to_delta(const PotentialProfile& V, const std::vector<double>& eps_list, double sigma,
                                        const InitialDatum& psi0, double T, const CompareOptions& options = {});

}  // namespace deltanls
