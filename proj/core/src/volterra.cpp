// The d = 2 memory kernel K2(t) = int_0^inf t^{s-1}/Gamma(s) ds.
//
// Direct route: s = e^v and a trapezoid rule in v, accumulated in the log domain since
// K2 grows like e^t. The integrand is analytic and decays like e^{2v} on the left and
// superexponentially on the right, so the trapezoid rule is geometrically convergent;
// the step shrinks like 1/sqrt(t) to resolve the peak at s ~ t.
//
// Fast route: piecewise Chebyshev interpolation of log K2 on y = log t.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "deltanls/quadrature.hpp"
#include "deltanls/specfun.hpp"

namespace deltanls {

namespace {

double log_integrand(double v, double log_t) {
  const double s = std::exp(v);
  return (s - 1.0) * log_t - std::lgamma(s) + v;
}

constexpr double kTableLo = -18.420680743952367;  // log 1e-8
constexpr double kTableHi = 6.907755278982137;    // log 1e3
constexpr double kSegment = 0.5;
constexpr int kDegree = 20;

struct ChebTable {
  int segments = 0;
  std::vector<std::array<double, kDegree + 1>> coeffs;

  ChebTable() {
    segments = static_cast<int>(std::ceil((kTableHi - kTableLo) / kSegment));
    coeffs.resize(segments);
    constexpr int n = kDegree + 1;
    for (int seg = 0; seg < segments; ++seg) {
      const double a = kTableLo + seg * kSegment;
      const double b = a + kSegment;
      std::array<double, n> f{};
      for (int k = 0; k < n; ++k) {
        const double x = std::cos(kPi * (k + 0.5) / n);
        f[k] = log_volterra_kernel_direct(std::exp(0.5 * (a + b) + 0.5 * (b - a) * x));
      }
      for (int j = 0; j < n; ++j) {
        double c = 0.0;
        for (int k = 0; k < n; ++k) c += f[k] * std::cos(kPi * j * (k + 0.5) / n);
        coeffs[seg][j] = 2.0 * c / n;
      }
      coeffs[seg][0] *= 0.5;
    }
  }

  double eval(double y) const {
    int seg = static_cast<int>((y - kTableLo) / kSegment);
    seg = std::clamp(seg, 0, segments - 1);
    const double a = kTableLo + seg * kSegment;
    const double x = (2.0 * (y - a) - kSegment) / kSegment;
    // Clenshaw
    double b1 = 0.0;
    double b2 = 0.0;
    for (int j = kDegree; j >= 1; --j) {
      const double b0 = 2.0 * x * b1 - b2 + coeffs[seg][j];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + coeffs[seg][0];
  }
};

const ChebTable& table() {
  static const ChebTable t;
  return t;
}

// int_0^inf s^power h^s / Gamma(s + shift) ds
double gamma_moment(double h, double shift, int power) {
  const double lh = std::log(h);
  const double upper = std::max(60.0, 3.0 * h + 60.0);
  auto f = [&](double s) {
    const double base = std::exp(s * lh - std::lgamma(s + shift));
    return power == 0 ? base : base * s;
  };
  std::vector<double> pts = {0.0, 0.5, 2.0, 8.0, 20.0, upper};
  if (h > 4.0) pts = {0.0, 0.5, 2.0, 0.5 * h, h, 2.0 * h, upper};
  std::sort(pts.begin(), pts.end());
  return quad::integrate(f, pts, {1e-300, 1e-13, 40});
}

}  // namespace

double log_volterra_kernel_direct(double t) {
  if (!(t > 0.0)) throw DomainError("volterra_kernel: t must be positive");
  const double lt = std::log(t);
  const double step = std::min(0.1, 0.25 / std::sqrt(std::max(t, 1.0)));
  const double v_lo = -45.0;
  const double v_hi = std::log(std::max(2.0 * t + 60.0, 60.0));
  const int n = static_cast<int>(std::ceil((v_hi - v_lo) / step));
  std::vector<double> logs(n + 1);
  double peak = -1e300;
  for (int k = 0; k <= n; ++k) {
    logs[k] = log_integrand(v_lo + k * step, lt);
    peak = std::max(peak, logs[k]);
  }
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return peak + std::log(sum * step);
}

double log_volterra_kernel(double t) {
  if (!(t > 0.0)) throw DomainError("volterra_kernel: t must be positive");
  const double y = std::log(t);
  if (y < kTableLo || y > kTableHi) return log_volterra_kernel_direct(t);
  return table().eval(y);
}

double volterra_kernel(double t) { return std::exp(log_volterra_kernel(t)); }

double volterra_kernel_integral(double h) {
  if (!(h > 0.0)) throw DomainError("volterra_kernel_integral: h must be positive");
  return gamma_moment(h, 1.0, 0);
}

double volterra_kernel_first_moment(double h) {
  if (!(h > 0.0)) throw DomainError("volterra_kernel_first_moment: h must be positive");
  return gamma_moment(h, 2.0, 1);
}

}  // namespace deltanls
