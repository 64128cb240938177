#include "deltanls/datum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <type_traits>

#include "deltanls/linear_delta.hpp"
#include "fftw_lock.hpp"
#include "deltanls/quadrature.hpp"
#include "deltanls/specfun.hpp"

namespace deltanls {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Complex sqrt_it(double t) { return std::sqrt(t) * eighth_turn(); }

// ---- Gaussian family -------------------------------------------------------

Complex gaussian_field(const Gaussian& g, Dim d, double t, double r) {
  const double a2 = g.width * g.width;
  const Complex den(a2, 2.0 * t);
  return g.amplitude * std::pow(a2 / den, 0.5 * to_int(d)) * std::exp(-r * r / (2.0 * den));
}

Complex gaussian_gradient(const Gaussian& g, Dim d, double t, double r) {
  const Complex den(g.width * g.width, 2.0 * t);
  return -r / den * gaussian_field(g, d, t, r);
}

// C D^{-d/2} exp(-p r^2 / D) (2 i d t / D + r^2 / D^2), p = 1/(2a^2), D = 1 + 4 i p t
Complex vanishing_field(const VanishingGaussian& g, Dim d, double t, double r) {
  const double a2 = g.width * g.width;
  const double p = 0.5 / a2;
  const Complex D(1.0, 4.0 * p * t);
  const double dd = to_int(d);
  const Complex base = (g.amplitude / a2) * std::pow(D, -0.5 * dd) * std::exp(-p * r * r / D);
  return base * (2.0 * kI * dd * t / D + r * r / (D * D));
}

Complex vanishing_gradient(const VanishingGaussian& g, Dim d, double t, double r) {
  const double a2 = g.width * g.width;
  const double p = 0.5 / a2;
  const Complex D(1.0, 4.0 * p * t);
  const double dd = to_int(d);
  const Complex base = (g.amplitude / a2) * std::pow(D, -0.5 * dd) * std::exp(-p * r * r / D);
  const Complex bracket = 2.0 * kI * dd * t / D + r * r / (D * D);
  return base * (-2.0 * p * r / D * bracket + 2.0 * r / (D * D));
}

// ---- Green data ------------------------------------------------------------

// (U(t) G^3_lambda)(0) = P'(0) / (2 pi)
Complex green3_origin(double a, double t) {
  const Complex p0 = 0.5 * std::exp(Complex(0.0, a * a * t)) * erfc_complex(a * sqrt_it(t));
  return (-a * p0 + free_propagator(Dim::One, t, 0.0)) / (2.0 * kPi);
}

Complex heat_kernel_green2(double lambda, double t, double r, bool gradient) {
  auto f = [&](double tau) -> Complex {
    const Complex z(tau, t);
    const Complex v = std::exp(-lambda * tau - r * r / (4.0 * z)) / (4.0 * kPi * z);
    return gradient ? v * (-r / (2.0 * z)) : v;
  };
  std::vector<double> pts = {0.0};
  const double upper = 45.0 / lambda;
  for (double s = std::max(1e-3 * t, 1e-12); s < upper; s *= 4.0) pts.push_back(s);
  pts.push_back(upper);
  return quad::integrate(f, pts, {1e-14, 1e-11, 50});
}

double radial_weight(Dim d, double r) { return sphere_measure(d) * std::pow(r, to_int(d) - 1); }

// int_{R^d} G_lambda(x) g(x) dx for a radial Gaussian g
Complex green_gaussian_overlap(Dim d, double lambda, const Gaussian& g) {
  if (g.amplitude == 0.0) return 0.0;
  auto f = [&](double r) -> double {
    if (r == 0.0) return d == Dim::One ? 2.0 * green(d, lambda, 0.0) : 0.0;
    return radial_weight(d, r) * green(d, lambda, r) * std::exp(-r * r / (2.0 * g.width * g.width));
  };
  const double ext = 12.0 * g.width;
  std::vector<double> pts = {0.0};
  for (double r = ext / 4096.0; r < ext; r *= 4.0) pts.push_back(r);
  pts.push_back(ext);
  return g.amplitude * quad::integrate(f, pts, {1e-15, 1e-12, 40});
}

// ---- blow-up datum ---------------------------------------------------------

struct LensFrame {
  double tau;    // T - t
  double s;      // free time of the standing-wave profile
  double scale;  // tau^{-d/2}
  Complex phase0;
};

LensFrame lens(const BlowupDatum& b, Dim d, double t) {
  const double tau = b.T - t;
  if (!(tau > 0.0)) throw DomainError("blow-up datum: free evolution requested at or beyond T");
  return {tau, t / (b.T * tau), std::pow(tau, -0.5 * to_int(d)), std::polar(1.0, b.omega / b.T + b.theta)};
}

double gaussian_mass(const Gaussian& g, Dim d) {
  return std::norm(g.amplitude) * std::pow(std::sqrt(kPi) * g.width, to_int(d));
}

}  // namespace

// ---- Grid1D ----------------------------------------------------------------

Grid1D::Grid1D(double x0, double dx, std::vector<Complex> values, int padding)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx_ > 0.0)) throw ConstraintError("Grid1D: spacing must be positive");
  if (values_.size() < 4) throw ConstraintError("Grid1D: at least four samples are required");
  if (padding < 1) throw ConstraintError("Grid1D: padding factor must be >= 1");
  const std::size_t n = values_.size();
  const std::size_t m = n * static_cast<std::size_t>(padding);
  // pad symmetrically so the data sit in the middle of the periodic box
  const std::size_t lead = (m - n) / 2;
  box_origin_ = x0_ - static_cast<double>(lead) * dx_;
  std::vector<Complex> buf(m, Complex(0.0));
  for (std::size_t k = 0; k < n; ++k) buf[lead + k] = values_[k];
  auto hat = std::make_shared<std::vector<Complex>>(m);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(hat->data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  auto k = std::make_shared<std::vector<double>>(m);
  const double L = static_cast<double>(m) * dx_;
  for (std::size_t j = 0; j < m; ++j) {
    const double jj = j < m / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(m);
    (*k)[j] = 2.0 * kPi * jj / L;
  }
  // Nyquist mode: drop it so the interpolant stays real-symmetric
  if (m % 2 == 0) (*hat)[m / 2] = 0.0;
  for (auto& h : *hat) h /= static_cast<double>(m);
  k_ = std::move(k);
  hat_ = std::move(hat);
}

Complex Grid1D::free_evolution(double t, double x) const {
  const auto& k = *k_;
  const auto& hat = *hat_;
  const double y = x - box_origin_;
  Complex sum = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) sum += hat[j] * std::polar(1.0, k[j] * y - k[j] * k[j] * t);
  return sum;
}

Complex Grid1D::free_gradient(double t, double x) const {
  const auto& k = *k_;
  const auto& hat = *hat_;
  const double y = x - box_origin_;
  Complex sum = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) sum += kI * k[j] * hat[j] * std::polar(1.0, k[j] * y - k[j] * k[j] * t);
  return sum;
}

Complex Grid1D::value(double x) const {
  const double u = (x - x0_) / dx_;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-9 && r >= 0.0 && r < static_cast<double>(values_.size())) {
    return values_[static_cast<std::size_t>(r)];
  }
  return free_evolution(0.0, x);
}

// ---- shared building blocks -------------------------------------------------

Complex half_line_exponential_evolution(double a, double t, double x) {
  if (t == 0.0) return x > 0.0 ? std::exp(-a * x) : (x == 0.0 ? 0.5 : 0.0);
  const Complex st = sqrt_it(t);
  const Complex z = (Complex(0.0, 2.0 * a * t) - x) / (2.0 * st);
  const Complex chirp = std::polar(1.0, x * x / (4.0 * t));
  if (x <= 2.0 * a * t) return 0.5 * chirp * faddeeva_w(kI * z);
  return std::exp(Complex(-a * x, a * a * t)) - 0.5 * chirp * faddeeva_w(-kI * z);
}

Complex green_free_evolution(Dim d, double lambda, double t, double x) {
  if (!(lambda > 0.0)) throw DomainError("green_free_evolution: lambda must be positive");
  if (t < 0.0) throw DomainError("green_free_evolution: t must be nonnegative");
  if (t == 0.0) return green(d, lambda, x);
  const double a = std::sqrt(lambda);
  switch (d) {
    case Dim::One:
      return (half_line_exponential_evolution(a, t, x) + half_line_exponential_evolution(a, t, -x)) / (2.0 * a);
    case Dim::Two: {
      const double r = std::abs(x);
      if (r == 0.0) return std::exp(Complex(0.0, lambda * t)) * expint_e1(Complex(0.0, lambda * t)) / (4.0 * kPi);
      return heat_kernel_green2(lambda, t, r, false);
    }
    case Dim::Three: {
      const double r = std::abs(x);
      if (r < 1e-7 * std::min(std::sqrt(t), 1.0 / a)) return green3_origin(a, t);
      return (half_line_exponential_evolution(a, t, r) - half_line_exponential_evolution(a, t, -r)) / (4.0 * kPi * r);
    }
  }
  return 0.0;
}

Complex green_free_gradient(Dim d, double lambda, double t, double x) {
  if (!(lambda > 0.0)) throw DomainError("green_free_gradient: lambda must be positive");
  if (t < 0.0) throw DomainError("green_free_gradient: t must be nonnegative");
  if (t == 0.0) return green_derivative(d, lambda, x);
  const double a = std::sqrt(lambda);
  switch (d) {
    case Dim::One:
      return 0.5 * (half_line_exponential_evolution(a, t, -x) - half_line_exponential_evolution(a, t, x));
    case Dim::Two: {
      const double r = std::abs(x);
      if (r == 0.0) return 0.0;
      return heat_kernel_green2(lambda, t, r, true);
    }
    case Dim::Three: {
      const double r = std::abs(x);
      if (r == 0.0) return 0.0;
      const Complex pp = half_line_exponential_evolution(a, t, r);
      const Complex pm = half_line_exponential_evolution(a, t, -r);
      const Complex odd = pp - pm;
      const Complex odd_prime = -a * (pp + pm) + 2.0 * free_propagator(Dim::One, t, r);
      return (odd_prime * r - odd) / (4.0 * kPi * r * r);
    }
  }
  return 0.0;
}

// ---- public API ------------------------------------------------------------

void validate_datum(const InitialDatum& datum, Dim d) {
  std::visit(Overloaded{
                 [](const Gaussian& g) {
                   if (!(g.width > 0.0)) throw ConstraintError("Gaussian datum: width must be positive");
                 },
                 [](const VanishingGaussian& g) {
                   if (!(g.width > 0.0)) throw ConstraintError("vanishing Gaussian datum: width must be positive");
                 },
                 [](const GreenDatum& g) {
                   if (!(g.lambda > 0.0)) throw ConstraintError("Green datum: lambda must be positive");
                   if (!(g.regular.width > 0.0)) throw ConstraintError("Green datum: regular width must be positive");
                 },
                 [d](const BoundStateDatum& b) { (void)bound_state(d, b.beta, b.sigma, b.omega); },
                 [d](const BlowupDatum& b) {
                   if (d == Dim::Two) throw ConstraintError("blow-up datum: only d = 1, 3");
                   if (!(b.T > 0.0)) throw ConstraintError("blow-up datum: T must be positive");
                   (void)bound_state(d, b.beta, 1.0, b.omega);
                 },
                 [d](const Grid1D&) {
                   if (d != Dim::One) throw ConstraintError("grid datum: only supported for d = 1");
                 },
             },
             datum);
}

bool has_singular_part(const InitialDatum& datum, Dim d) {
  if (d == Dim::One) return false;
  if (const auto* g = std::get_if<GreenDatum>(&datum)) return g->q0 != 0.0;
  return std::holds_alternative<BoundStateDatum>(datum) || std::holds_alternative<BlowupDatum>(datum);
}

Complex free_evolution(const InitialDatum& datum, Dim d, double t, double x) {
  if (t < 0.0) throw DomainError("free_evolution: t must be nonnegative");
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) -> Complex { return gaussian_field(g, d, t, std::abs(x)); },
          [&](const VanishingGaussian& g) -> Complex { return vanishing_field(g, d, t, std::abs(x)); },
          [&](const GreenDatum& g) -> Complex {
            return g.q0 * green_free_evolution(d, g.lambda, t, x) + gaussian_field(g.regular, d, t, std::abs(x));
          },
          [&](const BoundStateDatum& b) -> Complex {
            const BoundState s = bound_state(d, b.beta, b.sigma, b.omega);
            return std::polar(s.q_amp, b.phase) * green_free_evolution(d, b.omega, t, x);
          },
          [&](const BlowupDatum& b) -> Complex {
            if (d == Dim::Two) throw ConstraintError("blow-up datum: only d = 1, 3");
            const BoundState s = bound_state(d, b.beta, 1.0, b.omega);
            const LensFrame f = lens(b, d, t);
            return f.scale * std::polar(1.0, -x * x / (4.0 * f.tau)) * f.phase0 * s.q_amp *
                   green_free_evolution(d, b.omega, f.s, x / f.tau);
          },
          [&](const Grid1D& g) -> Complex {
            if (d != Dim::One) throw ConstraintError("grid datum: only supported for d = 1");
            return g.free_evolution(t, x);
          },
      },
      datum);
}

Complex free_evolution_at_origin(const InitialDatum& datum, Dim d, double t) {
  if (t == 0.0 && has_singular_part(datum, d)) {
    throw SingularityError("free_evolution_at_origin: datum is singular at the origin");
  }
  return free_evolution(datum, d, t, 0.0);
}

Complex free_evolution_gradient(const InitialDatum& datum, Dim d, double t, double x) {
  if (t < 0.0) throw DomainError("free_evolution_gradient: t must be nonnegative");
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) -> Complex { return gaussian_gradient(g, d, t, x); },
          [&](const VanishingGaussian& g) -> Complex { return vanishing_gradient(g, d, t, x); },
          [&](const GreenDatum& g) -> Complex {
            return g.q0 * green_free_gradient(d, g.lambda, t, x) + gaussian_gradient(g.regular, d, t, x);
          },
          [&](const BoundStateDatum& b) -> Complex {
            const BoundState s = bound_state(d, b.beta, b.sigma, b.omega);
            return std::polar(s.q_amp, b.phase) * green_free_gradient(d, b.omega, t, x);
          },
          [&](const BlowupDatum& b) -> Complex {
            if (d == Dim::Two) throw ConstraintError("blow-up datum: only d = 1, 3");
            const BoundState s = bound_state(d, b.beta, 1.0, b.omega);
            const LensFrame f = lens(b, d, t);
            const double y = x / f.tau;
            const Complex chirp = std::polar(1.0, -x * x / (4.0 * f.tau));
            const Complex inner = green_free_evolution(d, b.omega, f.s, y);
            const Complex inner_grad = green_free_gradient(d, b.omega, f.s, y) / f.tau;
            return f.scale * f.phase0 * s.q_amp * chirp * (-kI * x / (2.0 * f.tau) * inner + inner_grad);
          },
          [&](const Grid1D& g) -> Complex {
            if (d != Dim::One) throw ConstraintError("grid datum: only supported for d = 1");
            return g.free_gradient(t, x);
          },
      },
      datum);
}

Complex datum_value(const InitialDatum& datum, Dim d, double x) {
  if (const auto* g = std::get_if<Grid1D>(&datum)) {
    if (d != Dim::One) throw ConstraintError("grid datum: only supported for d = 1");
    return g->value(x);
  }
  return free_evolution(datum, d, 0.0, x);
}

double datum_mass(const InitialDatum& datum, Dim d) {
  return std::visit(Overloaded{
                        [&](const Gaussian& g) { return gaussian_mass(g, d); },
                        [&](const VanishingGaussian& g) {
                          const double a = g.width;
                          const double A2 = std::norm(g.amplitude);
                          switch (d) {
                            case Dim::One:
                              return 0.75 * std::sqrt(kPi) * a * A2;
                            case Dim::Two:
                              return 2.0 * kPi * a * a * A2;
                            case Dim::Three:
                              return 3.75 * std::pow(kPi, 1.5) * a * a * a * A2;
                          }
                          return 0.0;
                        },
                        [&](const GreenDatum& g) {
                          const Complex overlap = green_gaussian_overlap(d, g.lambda, g.regular);
                          return std::norm(g.q0) * green_norm_sq(d, g.lambda) + gaussian_mass(g.regular, d) +
                                 2.0 * std::real(std::conj(g.q0) * overlap);
                        },
                        [&](const BoundStateDatum& b) { return bound_mass(bound_state(d, b.beta, b.sigma, b.omega)); },
                        [&](const BlowupDatum& b) { return bound_mass(bound_state(d, b.beta, 1.0, b.omega)); },
                        [&](const Grid1D& g) {
                          double sum = 0.0;
                          const auto& v = g.values();
                          for (std::size_t k = 0; k < v.size(); ++k) {
                            sum += ((k == 0 || k + 1 == v.size()) ? 0.5 : 1.0) * std::norm(v[k]);
                          }
                          return sum * g.dx();
                        },
                    },
                    datum);
}

}  // namespace deltanls
