#include "deltanls/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

namespace deltanls {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// exp(-x (cosh u - 1)) cosh(nu u) integrated by the trapezoid rule. The integrand is
// entire and doubly-exponentially decaying, so the rule converges geometrically; the
// step 0.35/sqrt(x) keeps the aliasing error below 1e-16 for x >= 2.
double bessel_k_integral(double nu, double x) {
  const double h = 0.35 / std::sqrt(x);
  double sum = 0.5;
  for (int k = 1;; ++k) {
    const double u = k * h;
    const double term = std::exp(-x * (std::cosh(u) - 1.0)) * std::cosh(nu * u);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-x) * h * sum;
}

Complex faddeeva_upper(Complex z) {
  // |z| >= 6: Laplace continued fraction, 24 levels are enough for 1e-14.
  if (std::abs(z) >= 6.0) {
    Complex f = z;
    for (int k = 24; k >= 1; --k) f = z - (0.5 * k) / f;
    return kI / (kSqrtPi * f);
  }
  // Trapezoid rule on the Gaussian integral with the pole correction. The node grid
  // (integers or half-integers times h) is chosen to keep nodes away from Re z.
  constexpr double h = 0.5;
  const double frac = z.real() / h - std::round(z.real() / h);
  const bool shifted = std::abs(frac) < 0.25;
  const double offset = shifted ? 0.5 : 0.0;
  Complex sum = 0.0;
  for (int n = -16; n <= 16; ++n) {
    const double t = (n + offset) * h;
    sum += std::exp(-t * t) / (z - t);
  }
  sum *= kI * h / kPi;
  const Complex e = std::exp(-z * z);
  const Complex q = std::exp(-2.0 * kPi * kI * z / h);
  return sum + (shifted ? 2.0 * e / (1.0 + q) : 2.0 * e / (1.0 - q));
}

}  // namespace

double gamma(double s) {
  if (!(s > 0.0)) throw DomainError("gamma: argument must be positive");
  return std::tgamma(s);
}

double bessel_k0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k0: argument must be positive");
  if (x >= 2.0) return bessel_k_integral(0.0, x);
  const double y = 0.25 * x * x;
  double term = 1.0;
  double i0 = 1.0;
  double harmonic = 0.0;
  double rest = 0.0;
  for (int k = 1; k < 30; ++k) {
    term *= y / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    rest += term * harmonic;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i0 + rest;
}

double bessel_k1(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k1: argument must be positive");
  if (x >= 2.0) return bessel_k_integral(1.0, x);
  const double y = 0.25 * x * x;
  double term = 1.0;  // y^k / (k! (k+1)!)
  double psi_sum = 1.0 - 2.0 * kEulerGamma;  // psi(k+1) + psi(k+2)
  double i1 = 0.0;
  double rest = 0.0;
  for (int k = 0; k < 30; ++k) {
    if (k > 0) {
      term *= y / (static_cast<double>(k) * (k + 1));
      psi_sum += 1.0 / k + 1.0 / (k + 1);
    }
    i1 += term;
    rest += psi_sum * term;
  }
  i1 *= 0.5 * x;
  return 1.0 / x + i1 * std::log(0.5 * x) - 0.25 * x * rest;
}

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

Complex erfc_complex(Complex z) {
  // real axis: keep the result real
  if (z.imag() == 0.0) return std::erfc(z.real());
  if (z.real() >= 0.0) {
    const Complex e = std::exp(-z * z);
    if (e == 0.0) return 0.0;
    return e * faddeeva_upper(kI * z);
  }
  return 2.0 - erfc_complex(-z);
}

Complex expint_e1(Complex z) {
  if (z == 0.0) throw DomainError("expint_e1: pole at the origin");
  const double az = std::abs(z);
  if (az <= 2.0 || (z.real() < 0.0 && std::abs(z.imag()) < 1.0 && az < 20.0)) {
    Complex term = 1.0;
    Complex sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -z / static_cast<double>(k);
      const Complex add = term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(z) - sum;
  }
  // Modified Lentz on E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))).
  constexpr double tiny = 1e-300;
  Complex b = z + 1.0;
  Complex f = b;
  Complex c = b;
  Complex d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double a = -static_cast<double>(k) * k;
    b += 2.0;
    d = b + a * d;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(-z) / f;
  }
  throw NumericalError("expint_e1: continued fraction did not converge");
}

Complex free_propagator(Dim d, double t, double r) {
  if (t == 0.0) throw DomainError("free_propagator: t must be nonzero");
  const double dd = to_int(d);
  const double modulus = std::pow(4.0 * kPi * std::abs(t), -0.5 * dd);
  const double branch = (t > 0.0 ? -1.0 : 1.0) * 0.25 * kPi * dd;
  return modulus * std::polar(1.0, r * r / (4.0 * t) + branch);
}

Complex free_propagator(Dim d, double t, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(to_int(d))) {
    throw ConstraintError("free_propagator: point has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(to_int(d)));
  }
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return free_propagator(d, t, std::sqrt(r2));
}

}  // namespace deltanls
