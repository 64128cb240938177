#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "deltanls/types.hpp"

namespace deltanls {

struct LinearCoupling {
  double alpha = 0.0;
};

/// alpha(q) = beta |q|^{2 sigma}
struct NonlinearCoupling {
  double beta = 0.0;
  double sigma = 1.0;
};

class DeltaModel {
 public:
  static DeltaModel linear(Dim d, double alpha);
  /// Throws ConstraintError unless beta != 0 and sigma > 0.
  static DeltaModel nonlinear(Dim d, double beta, double sigma);

  Dim dim() const noexcept { return d_; }
  bool is_linear() const noexcept { return std::holds_alternative<LinearCoupling>(coupling_); }
  const LinearCoupling& linear_coupling() const;
  const NonlinearCoupling& nonlinear_coupling() const;

  /// Effective strength for a charge of modulus |q|: alpha itself in the linear case.
  double alpha_at(double q_abs) const noexcept;

 private:
  DeltaModel(Dim d, std::variant<LinearCoupling, NonlinearCoupling> c) : d_(d), coupling_(c) {}
  Dim d_;
  std::variant<LinearCoupling, NonlinearCoupling> coupling_;
};

double kappa(Dim d, double alpha);

/// Boundary-condition coefficient phi_lambda(0) = theta q. Pole error for d = 1, alpha = -2 sqrt(lambda).
double theta(Dim d, double lambda, double alpha);

/// Green's function of -Laplacian + lambda. In d = 1, x is the signed coordinate; in d = 2, 3 it
/// is |x| and must be nonzero.
double green(Dim d, double lambda, double x);
/// Radial derivative (x-derivative in d = 1; at x = 0 the right limit is returned).
double green_derivative(Dim d, double lambda, double x);
/// lambda -> 0 Green's function, d = 2, 3 only.
double green_zero(Dim d, double r);
/// ||G_lambda||^2 over R^d.
double green_norm_sq(Dim d, double lambda);

/// The negative eigenvalue, when present.
std::optional<double> eigenvalue(Dim d, double alpha);

/// Normalization making eigenstate_norm_const(d, lambda) * G_lambda a unit vector.
double eigenstate_norm_const(Dim d, double lambda);

/// Surface measure of the unit sphere: 2 (two points) for d = 1, 2 pi, 4 pi.
double sphere_measure(Dim d);

/// Regular part given by closed-form callables. In d = 1 they are functions of x on
/// [-extent, extent]; in d = 2, 3 radial functions on [0, extent].
struct ClosedFormPart {
  std::function<Complex(double)> value;
  std::function<Complex(double)> derivative;
  double extent = 0.0;
};

/// Regular part sampled on x_k = origin + k * spacing (d = 1) or radii r_k = origin + k * spacing.
struct GridPart {
  double origin = 0.0;
  double spacing = 0.0;
  std::vector<Complex> values;
};

using RegularPart = std::variant<ClosedFormPart, GridPart>;

/// u = phi_lambda + kappa q G_lambda.
struct DecomposedState {
  double lambda = 1.0;
  Complex q{};
  RegularPart regular;
};

/// Quadratic form of the linear model on a decomposed state. Grid parts use second-order
/// central differences and the trapezoid rule.
double quadratic_form(const DecomposedState& state, const DeltaModel& model);

}  // namespace deltanls
