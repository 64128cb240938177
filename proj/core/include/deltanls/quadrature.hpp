#pragma once

// Small quadrature toolkit shared by the modules: Gauss-Legendre rules and an
// adaptive Gauss-Kronrod (7/15) integrator that works for real and complex
// integrands.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "deltanls/error.hpp"

namespace deltanls::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached and immutable.
const GaussRule& gauss_legendre(std::size_t n);

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class F, class T>
T kronrod15(F& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const T fc = f(c);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    resk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
  }
  err = magnitude((resk - resg) * hl);
  return resk * hl;
}

template <class F, class T>
T adapt(F& f, double a, double b, T whole, double err, double abs_tol, double rel_tol, int depth,
        int max_depth, double& total_err) {
  if (err <= std::max(abs_tol, rel_tol * magnitude(whole)) || depth >= max_depth || b - a < 1e-15 * (1.0 + std::abs(a))) {
    total_err += err;
    return whole;
  }
  const double m = 0.5 * (a + b);
  double el = 0.0;
  double er = 0.0;
  const T left = kronrod15<F, T>(f, a, m, el);
  const T right = kronrod15<F, T>(f, m, b, er);
  return adapt<F, T>(f, a, m, left, el, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, total_err) +
         adapt<F, T>(f, m, b, right, er, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, total_err);
}

}  // namespace detail

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b]. `error_estimate` receives the
/// accumulated Kronrod-Gauss difference.
template <class F>
auto integrate(F f, double a, double b, Options opt = {}, double* error_estimate = nullptr) {
  using T = decltype(f(a));
  double err = 0.0;
  const T whole = detail::kronrod15<F, T>(f, a, b, err);
  double total = 0.0;
  T value = detail::adapt<F, T>(f, a, b, whole, err, opt.abs_tol, opt.rel_tol, 0, opt.max_depth, total);
  if (error_estimate) *error_estimate = total;
  return value;
}

/// Same as integrate() but splits [a, b] at the given interior breakpoints first.
template <class F>
auto integrate(F f, const std::vector<double>& points, Options opt = {}, double* error_estimate = nullptr) {
  using T = decltype(f(points.front()));
  T sum{};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double e = 0.0;
    sum += integrate(f, points[i], points[i + 1], opt, &e);
    total += e;
  }
  if (error_estimate) *error_estimate = total;
  return sum;
}

/// Fixed composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
template <class F>
auto gauss_composite(F f, double a, double b, std::size_t panels, std::size_t order) {
  using T = decltype(f(a));
  const GaussRule& rule = gauss_legendre(order);
  const double w = (b - a) / static_cast<double>(panels);
  T sum{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = a + (static_cast<double>(p) + 0.5) * w;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      sum += f(c + 0.5 * w * rule.nodes[k]) * rule.weights[k];
    }
  }
  return sum * (0.5 * w);
}

}  // namespace deltanls::quad
