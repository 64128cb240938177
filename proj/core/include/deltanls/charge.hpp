#pragma once

// Product-integration solver for the linear and nonlinear charge equations
//   q(t) + int_0^t K_d(t - s) c_d(alpha(q(s))) q(s) ds = m_d f_d(t)
// on a uniform grid t_n = n h. The unknown times c_d is interpolated piecewise linearly
// and integrated exactly against the kernel.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "deltanls/datum.hpp"
#include "deltanls/linear_delta.hpp"

namespace deltanls {

/// t^{-1/2} for d = 1, 3; K2(t) for d = 2.
double kernel(Dim d, double t);

Complex coupling_const(Dim d, double alpha);
Complex m_const(Dim d);

/// Charge of the datum at t = 0: psi0(0) in d = 1, the coefficient of G_lambda in d = 2, 3.
Complex initial_charge(const InitialDatum& datum, Dim d);

/// f_d(t_n) for n = 0..N with N = round(T/h) (the trajectory stores m_d f_d). Closed forms are
/// used for Green-type data in d = 3; everything else goes through adaptive quadrature of the
/// convolution. For data with a singular part f_d(0) is the limit t -> 0+, nonzero in d = 2, 3.
std::vector<Complex> forcing(const InitialDatum& datum, Dim d, double T, double h);
Complex forcing_at(const InitialDatum& datum, Dim d, double t);

/// Convolution weights: int_0^{t_n} K(t_n - s) g(s) ds ~ sum_{m=0}^{n-1} w[m] g_{n-m} + tail[n-1] g_0.
struct ProductWeights {
  double h = 0.0;
  std::vector<double> w;
  std::vector<double> tail;
  // d = 1, 3 only: start[n-1] (g_1 - g_0) makes step n exact for g = sqrt(s).
  // Empty in d = 2.
  std::vector<double> start;
};

/// Weights for n up to N. The d = 2 weights are cached per (h, N).
std::shared_ptr<const ProductWeights> product_weights(Dim d, double h, std::size_t N);

struct ChargeTrajectory {
  Dim d = Dim::One;
  double h = 0.0;
  std::vector<Complex> q;        // q_n at t_n = n h, only the resolved samples
  std::vector<Complex> forcing;  // m_d f_d(t_n) on the requested grid
  bool blown_up = false;
  std::size_t truncation_index = 0;  // first unresolved step when blown_up
  double guard = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;  // linear runs
  bool linear = true;

  double time(std::size_t n) const { return static_cast<double>(n) * h; }
  double last_time() const { return q.empty() ? 0.0 : time(q.size() - 1); }
};

struct NonlinearOptions {
  double blowup_guard = 1e6;
  int max_iterations = 200;
  /// Test hook: replaces alpha(|q|) = beta |q|^{2 sigma}.
  std::function<double(double)> alpha_override;
};

ChargeTrajectory solve_linear(const DeltaModel& model, const InitialDatum& datum, double T, double h);
ChargeTrajectory solve_nonlinear(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                                 const NonlinearOptions& options = {});
/// Dispatches on the model coupling.
ChargeTrajectory solve(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                       const NonlinearOptions& options = {});

/// Number of steps for (T, h); throws ConstraintError unless h divides T.
std::size_t step_count(double T, double h);

}  // namespace deltanls
