#include "deltanls/linear_delta.hpp"

#include <cmath>
#include <vector>

#include "deltanls/quadrature.hpp"
#include "deltanls/specfun.hpp"

namespace deltanls {

DeltaModel DeltaModel::linear(Dim d, double alpha) {
  if (!std::isfinite(alpha)) throw ConstraintError("alpha must be finite");
  return DeltaModel(d, LinearCoupling{alpha});
}

DeltaModel DeltaModel::nonlinear(Dim d, double beta, double sigma) {
  if (beta == 0.0 || !std::isfinite(beta)) throw ConstraintError("beta must be finite and nonzero");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConstraintError("sigma must be positive");
  return DeltaModel(d, NonlinearCoupling{beta, sigma});
}

const LinearCoupling& DeltaModel::linear_coupling() const {
  if (!is_linear()) throw ConstraintError("model is nonlinear, a linear coupling was requested");
  return std::get<LinearCoupling>(coupling_);
}

const NonlinearCoupling& DeltaModel::nonlinear_coupling() const {
  if (is_linear()) throw ConstraintError("model is linear, a nonlinear coupling was requested");
  return std::get<NonlinearCoupling>(coupling_);
}

double DeltaModel::alpha_at(double q_abs) const noexcept {
  if (const auto* l = std::get_if<LinearCoupling>(&coupling_)) return l->alpha;
  const auto& n = std::get<NonlinearCoupling>(coupling_);
  return n.beta * std::pow(q_abs, 2.0 * n.sigma);
}

double kappa(Dim d, double alpha) { return d == Dim::One ? -alpha : 1.0; }

double theta(Dim d, double lambda, double alpha) {
  if (!(lambda > 0.0)) throw DomainError("theta: lambda must be positive");
  const double s = std::sqrt(lambda);
  switch (d) {
    case Dim::One:
      if (alpha + 2.0 * s == 0.0) throw DomainError("theta: pole at alpha = -2 sqrt(lambda)");
      return 2.0 * s / (alpha + 2.0 * s);
    case Dim::Two:
      return alpha + (std::log(0.5 * s) + kEulerGamma) / (2.0 * kPi);
    case Dim::Three:
      return alpha + s / (4.0 * kPi);
  }
  return 0.0;
}

double green(Dim d, double lambda, double x) {
  if (!(lambda > 0.0)) throw DomainError("green: lambda must be positive");
  const double s = std::sqrt(lambda);
  const double r = std::abs(x);
  if (d == Dim::One) return std::exp(-s * r) / (2.0 * s);
  if (r == 0.0) throw SingularityError("green: singular at the origin for d = 2, 3");
  if (d == Dim::Two) return bessel_k0(s * r) / (2.0 * kPi);
  return std::exp(-s * r) / (4.0 * kPi * r);
}

double green_derivative(Dim d, double lambda, double x) {
  if (!(lambda > 0.0)) throw DomainError("green_derivative: lambda must be positive");
  const double s = std::sqrt(lambda);
  const double r = std::abs(x);
  if (d == Dim::One) return (x < 0.0 ? 0.5 : -0.5) * std::exp(-s * r);
  if (r == 0.0) throw SingularityError("green_derivative: singular at the origin for d = 2, 3");
  if (d == Dim::Two) return -s * bessel_k1(s * r) / (2.0 * kPi);
  return -std::exp(-s * r) * (1.0 + s * r) / (4.0 * kPi * r * r);
}

double green_zero(Dim d, double r) {
  if (d == Dim::One) throw ConstraintError("green_zero: only defined for d = 2, 3");
  r = std::abs(r);
  if (r == 0.0) throw SingularityError("green_zero: singular at the origin");
  return d == Dim::Two ? -std::log(r) / (2.0 * kPi) : 1.0 / (4.0 * kPi * r);
}

double green_norm_sq(Dim d, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("green_norm_sq: lambda must be positive");
  switch (d) {
    case Dim::One:
      return 0.25 / std::pow(lambda, 1.5);
    case Dim::Two:
      return 1.0 / (4.0 * kPi * lambda);
    case Dim::Three:
      return 1.0 / (8.0 * kPi * std::sqrt(lambda));
  }
  return 0.0;
}

std::optional<double> eigenvalue(Dim d, double alpha) {
  switch (d) {
    case Dim::One:
      if (alpha < 0.0) return -0.25 * alpha * alpha;
      return std::nullopt;
    case Dim::Two:
      return -4.0 * std::exp(-4.0 * kPi * alpha - 2.0 * kEulerGamma);
    case Dim::Three:
      if (alpha < 0.0) return -16.0 * kPi * kPi * alpha * alpha;
      return std::nullopt;
  }
  return std::nullopt;
}

double eigenstate_norm_const(Dim d, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("eigenstate_norm_const: lambda must be positive");
  switch (d) {
    case Dim::One:
      return 2.0 * std::pow(lambda, 0.75);
    case Dim::Two:
      return 2.0 * std::sqrt(kPi * lambda);
    case Dim::Three:
      return 2.0 * std::pow(4.0 * kPi * kPi * lambda, 0.25);
  }
  return 0.0;
}

double sphere_measure(Dim d) {
  switch (d) {
    case Dim::One:
      return 2.0;
    case Dim::Two:
      return 2.0 * kPi;
    case Dim::Three:
      return 4.0 * kPi;
  }
  return 0.0;
}

namespace {

// Pieces of the form that depend on the regular part:
//   grad  = ||grad u||^2 (d = 1) or ||grad phi||^2 (d = 2, 3)
//   cross = <G_lambda, phi>,  phi2 = ||phi||^2
struct FormPieces {
  double grad = 0.0;
  Complex cross{};
  double phi2 = 0.0;
};

std::vector<double> radial_breakpoints(double extent) {
  std::vector<double> pts = {0.0};
  for (double r = extent / 1024.0; r < extent; r *= 4.0) pts.push_back(r);
  pts.push_back(extent);
  return pts;
}

FormPieces closed_form_pieces(const ClosedFormPart& part, Dim d, double lambda, Complex kq) {
  FormPieces out;
  const quad::Options opt{1e-15, 1e-12, 40};
  if (d == Dim::One) {
    auto grad_u = [&](double x) {
      return std::norm(part.derivative(x) + kq * green_derivative(Dim::One, lambda, x));
    };
    // split at the kink; evaluate each side away from x = 0 exactly
    auto left = [&](double x) { return grad_u(std::min(x, -1e-300)); };
    std::vector<double> pr = radial_breakpoints(part.extent);
    std::vector<double> pl;
    for (auto it = pr.rbegin(); it != pr.rend(); ++it) pl.push_back(-*it);
    out.grad = quad::integrate(left, pl, opt) + quad::integrate(grad_u, pr, opt);
    return out;
  }
  const double w = sphere_measure(d);
  const double p = to_int(d) - 1.0;
  const auto pts = radial_breakpoints(part.extent);
  out.grad = w * quad::integrate([&](double r) { return std::norm(part.derivative(r)) * std::pow(r, p); }, pts, opt);
  out.phi2 = w * quad::integrate([&](double r) { return std::norm(part.value(r)) * std::pow(r, p); }, pts, opt);
  out.cross = w * quad::integrate(
                      [&](double r) -> Complex {
                        if (r == 0.0) return 0.0;
                        return green(d, lambda, r) * part.value(r) * std::pow(r, p);
                      },
                      pts, opt);
  return out;
}

FormPieces grid_pieces(const GridPart& g, Dim d, double lambda, Complex kq) {
  FormPieces out;
  const auto& v = g.values;
  const std::size_t n = v.size();
  if (n < 3 || !(g.spacing > 0.0)) throw NumericalError("quadratic_form: grid too small");
  const double h = g.spacing;
  std::vector<Complex> dv(n);
  dv[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  dv[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) dv[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);

  if (d == Dim::One) {
    // trapezoid on each side of the node closest to 0, with one-sided limits of G' there
    const long k0 = std::lround(-g.origin / h);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = g.origin + static_cast<double>(k) * h;
      const long kk = static_cast<long>(k);
      double weight = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      if (kk == k0) {
        const double s = std::sqrt(lambda);
        const double e = std::exp(-s * std::abs(x));
        sum += 0.5 * std::norm(dv[k] + kq * 0.5 * e) + 0.5 * std::norm(dv[k] - kq * 0.5 * e);
        continue;
      }
      sum += weight * std::norm(dv[k] + kq * green_derivative(Dim::One, lambda, x));
    }
    out.grad = sum * h;
    return out;
  }
  const double w = sphere_measure(d);
  const double p = to_int(d) - 1.0;
  double grad = 0.0;
  double phi2 = 0.0;
  Complex cross = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = g.origin + static_cast<double>(k) * h;
    const double weight = ((k == 0 || k == n - 1) ? 0.5 : 1.0) * std::pow(r, p);
    grad += weight * std::norm(dv[k]);
    phi2 += weight * std::norm(v[k]);
    if (r > 0.0) cross += weight * green(d, lambda, r) * v[k];
  }
  out.grad = w * h * grad;
  out.phi2 = w * h * phi2;
  out.cross = w * h * cross;
  return out;
}

}  // namespace

double quadratic_form(const DecomposedState& state, const DeltaModel& model) {
  const Dim d = model.dim();
  const double alpha = model.linear_coupling().alpha;
  const double lambda = state.lambda;
  if (!(lambda > 0.0)) throw DomainError("quadratic_form: lambda must be positive");
  const Complex kq = kappa(d, alpha) * state.q;
  FormPieces pieces = std::visit(
      [&](const auto& part) {
        using T = std::decay_t<decltype(part)>;
        if constexpr (std::is_same_v<T, ClosedFormPart>) {
          return closed_form_pieces(part, d, lambda, kq);
        } else {
          return grid_pieces(part, d, lambda, kq);
        }
      },
      state.regular);
  const double q2 = std::norm(state.q);
  if (d == Dim::One) return pieces.grad + alpha * q2;
  // ||u||^2 - ||phi||^2 = 2 Re(conj(q) <G, phi>) + |q|^2 ||G||^2 (kappa = 1)
  const double extra = 2.0 * std::real(std::conj(state.q) * pieces.cross) + q2 * green_norm_sq(d, lambda);
  return pieces.grad - lambda * extra + theta(d, lambda, alpha) * q2;
}

}  // namespace deltanls
