#include "deltanls/charge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "deltanls/quadrature.hpp"
#include "deltanls/specfun.hpp"

namespace deltanls {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// ---- forcing ----------------------------------------------------------------

// m_3 f_3 for the unit Green datum G_lambda
Complex green3_forcing(double lambda, double t) {
  return std::exp(Complex(0.0, lambda * t)) * erfc_complex(eighth_turn() * std::sqrt(lambda * t));
}

using OriginFn = std::function<Complex(double)>;

// int_0^t (t - s)^{-1/2} g(s) ds, g allowed an s^{-1/2} singularity at 0:
// s = v^2 on [0, t/2] and s = t - u^2 on [t/2, t].
Complex abel_convolution(const OriginFn& g, double t) {
  const quad::Options opt{1e-15, 1e-12, 40};
  const double half = std::sqrt(0.5 * t);
  auto near_zero = [&](double v) -> Complex { return g(v * v) * (2.0 * v / std::sqrt(t - v * v)); };
  auto near_t = [&](double u) -> Complex { return 2.0 * g(t - u * u); };
  return quad::integrate(near_zero, 0.0, half, opt) + quad::integrate(near_t, 0.0, half, opt);
}

// int_0^t K2(t - s) g(s) ds, g allowed a logarithmic singularity at 0. Near s = t the first
// cell [0, delta] in u = t - s uses the exact kernel moments with g linear; the rest is
// integrated in log variables.
Complex k2_convolution(const OriginFn& g, double t) {
  const quad::Options opt{1e-15, 1e-11, 40};
  const double delta = std::min(1e-6, 0.25 * t);
  const Complex gt = g(t);
  const Complex gd = g(t - delta);
  Complex sum = gt * volterra_kernel_integral(delta) + (gd - gt) * volterra_kernel_first_moment(delta);
  auto near_t = [&](double w) -> Complex {
    const double u = std::exp(w);
    return volterra_kernel(u) * u * g(t - u);
  };
  sum += quad::integrate(near_t, std::log(delta), std::log(0.5 * t), opt);
  auto near_zero = [&](double w) -> Complex {
    const double s = std::exp(w);
    return volterra_kernel(t - s) * s * g(s);
  };
  sum += quad::integrate(near_zero, std::log(1e-16 * t), std::log(0.5 * t), opt);
  return sum;
}

// ---- weights ----------------------------------------------------------------

struct CellMoments {
  std::vector<double> a;  // int over cell m of K
  std::vector<double> b;  // (1/h) int over cell m of (u - m h) K
};

CellMoments abel_moments(double h, std::size_t N) {
  CellMoments c;
  c.a.resize(N);
  c.b.resize(N);
  const double sh = std::sqrt(h);
  for (std::size_t i = 0; i < N; ++i) {
    const double m = static_cast<double>(i);
    const double s0 = std::sqrt(m);
    const double s1 = std::sqrt(m + 1.0);
    const double dsq = 1.0 / (s1 + s0);                                      // sqrt(m+1) - sqrt(m)
    const double d32 = (3.0 * m * m + 3.0 * m + 1.0) / ((m + 1.0) * s1 + m * s0);  // (m+1)^{3/2} - m^{3/2}
    c.a[i] = 2.0 * sh * dsq;
    c.b[i] = sh * (2.0 / 3.0 * d32 - 2.0 * m * dsq);
  }
  return c;
}

CellMoments k2_moments(double h, std::size_t N) {
  CellMoments c;
  c.a.resize(N);
  c.b.resize(N);
  if (N == 0) return c;
  c.a[0] = volterra_kernel_integral(h);
  c.b[0] = volterra_kernel_first_moment(h);
  const quad::GaussRule& rule = quad::gauss_legendre(16);
  for (std::size_t i = 1; i < N; ++i) {
    const double lo = static_cast<double>(i) * h;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double y = 0.5 * (rule.nodes[k] + 1.0);  // position inside the cell, in [0, 1]
      const double kv = volterra_kernel(lo + y * h) * rule.weights[k];
      a += kv;
      b += y * kv;
    }
    c.a[i] = 0.5 * h * a;
    c.b[i] = 0.5 * h * b;
  }
  return c;
}

std::shared_ptr<ProductWeights> assemble(const CellMoments& c, double h) {
  auto pw = std::make_shared<ProductWeights>();
  const std::size_t N = c.a.size();
  pw->h = h;
  pw->w.resize(N);
  pw->tail = c.b;
  for (std::size_t m = 0; m < N; ++m) pw->w[m] = c.a[m] - c.b[m] + (m > 0 ? c.b[m - 1] : 0.0);
  return pw;
}

// ---- per-step scalar solve --------------------------------------------------

using AlphaFn = std::function<double(double)>;

std::vector<Complex> scaled_forcing(const InitialDatum& datum, Dim d, double T, double h);

struct StepResult {
  Complex q;
  bool blown_up = false;
};

// Solves q (1 + w0 c(alpha(|q|))) = R via the modulus equation
//   phi(r) = r |1 + w0 c(alpha(r))| - |R| = 0,
// taking the root found by walking from r_prev, then q = R / (1 + w0 c(alpha(r))).
StepResult nonlinear_step(Dim d, Complex R, double r_prev, const AlphaFn& alpha, double w0, double guard,
                          int max_iterations) {
  const double target = std::abs(R);
  if (target == 0.0) return {Complex(0.0), false};
  auto z_of = [&](double r) { return 1.0 + w0 * coupling_const(d, alpha(r)); };
  auto phi = [&](double r) { return r * std::abs(z_of(r)) - target; };

  double r0 = r_prev > 0.0 ? r_prev : target;
  r0 = std::min(r0, guard);
  double lo = 0.0;
  double hi = 0.0;
  double f0 = phi(r0);
  if (f0 == 0.0) return {R / z_of(r0), false};
  if (f0 < 0.0) {
    lo = r0;
    double step = 0.25 * std::max(r0, 1e-300);
    hi = r0 + step;
    while (phi(hi) < 0.0) {
      if (hi >= guard) return {Complex(0.0), true};
      lo = hi;
      step *= 2.0;
      hi = std::min(hi + step, guard);
    }
  } else {
    hi = r0;
    double step = 0.25 * r0;
    lo = r0 - step;
    while (lo > 0.0 && phi(lo) > 0.0) {
      hi = lo;
      step *= 2.0;
      lo = std::max(lo - step, 0.0);
    }
  }
  // safeguarded Newton with bisection fallback; phi' from a centred difference
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < max_iterations; ++it) {
    const double f = phi(r);
    if (f == 0.0) break;
    if (f < 0.0) lo = r; else hi = r;
    if (hi - lo <= 4e-16 * hi) break;
    const double e = 1e-7 * std::max(r, 1e-300);
    const double df = (phi(r + e) - phi(r - e)) / (2.0 * e);
    double next = r - f / df;
    if (!(df > 0.0 || df < 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-16 * r) {
      r = next;
      break;
    }
    r = next;
    if (it + 1 == max_iterations) throw NumericalError("charge solver: modulus equation did not converge");
  }
  return {R / z_of(r), false};
}

ChargeTrajectory run(Dim d, const InitialDatum& datum, double T, double h, const AlphaFn& alpha, bool linear,
                     double guard, int max_iterations) {
  validate_datum(datum, d);
  const std::size_t N = step_count(T, h);
  ChargeTrajectory tr;
  tr.d = d;
  tr.h = h;
  tr.guard = guard;
  tr.forcing = scaled_forcing(datum, d, T, h);
  const auto weights = product_weights(d, h, N);
  const auto& w = weights->w;
  const auto& tail = weights->tail;
  const auto& start = weights->start;

  std::vector<Complex> g;  // c(alpha(|q_n|)) q_n
  g.reserve(N + 1);
  tr.q.reserve(N + 1);
  tr.q.push_back(tr.forcing[0]);
  g.push_back(coupling_const(d, alpha(std::abs(tr.q[0]))) * tr.q[0]);

  const Complex linear_c = coupling_const(d, alpha(0.0));
  const Complex linear_z = w.empty() ? Complex(1.0) : 1.0 + w[0] * linear_c;
  for (std::size_t n = 1; n <= N; ++n) {
    Complex mem = tail[n - 1] * g[0];
    for (std::size_t m = 1; m < n; ++m) mem += w[m] * g[n - m];
    // the start correction is implicit at n = 1, where g_1 is the unknown
    double w0 = w[0];
    if (!start.empty()) {
      if (n == 1) {
        w0 += start[0];
        mem -= start[0] * g[0];
      } else {
        mem += start[n - 1] * (g[1] - g[0]);
      }
    }
    const Complex R = tr.forcing[n] - mem;
    Complex qn;
    if (linear) {
      qn = n == 1 && !start.empty() ? R / (1.0 + w0 * linear_c) : R / linear_z;
    } else {
      const StepResult s = nonlinear_step(d, R, std::abs(tr.q.back()), alpha, w0, guard, max_iterations);
      if (s.blown_up) {
        tr.blown_up = true;
        tr.truncation_index = n;
        break;
      }
      qn = s.q;
    }
    if (!is_finite(qn)) throw NumericalError("charge solver: non-finite charge at step " + std::to_string(n));
    if (std::abs(qn) > guard) {
      tr.blown_up = true;
      tr.truncation_index = n;
      break;
    }
    tr.q.push_back(qn);
    g.push_back(linear ? linear_c * qn : coupling_const(d, alpha(std::abs(qn))) * qn);
  }
  return tr;
}

}  // namespace

double kernel(Dim d, double t) {
  if (!(t > 0.0)) throw DomainError("kernel: t must be positive");
  return d == Dim::Two ? volterra_kernel(t) : 1.0 / std::sqrt(t);
}

Complex coupling_const(Dim d, double alpha) {
  switch (d) {
    case Dim::One:
      return eighth_turn() * (alpha / (2.0 * kSqrtPi));
    case Dim::Two:
      return 4.0 * kPi * Complex(alpha + (std::log(0.5) + kEulerGamma) / (2.0 * kPi), -0.125);
    case Dim::Three:
      return eighth_turn() * (4.0 * kSqrtPi * alpha);
  }
  return 0.0;
}

Complex m_const(Dim d) {
  switch (d) {
    case Dim::One:
      return 1.0;
    case Dim::Two:
      return 4.0 * kPi;
    case Dim::Three:
      return coupling_const(Dim::Three, 1.0);
  }
  return 0.0;
}

Complex initial_charge(const InitialDatum& datum, Dim d) {
  validate_datum(datum, d);
  if (d == Dim::One) return datum_value(datum, d, 0.0);
  if (const auto* g = std::get_if<GreenDatum>(&datum)) return g->q0;
  if (const auto* b = std::get_if<BoundStateDatum>(&datum)) {
    return std::polar(bound_state(d, b->beta, b->sigma, b->omega).q_amp, b->phase);
  }
  if (const auto* b = std::get_if<BlowupDatum>(&datum)) {
    const BoundState s = bound_state(d, b->beta, 1.0, b->omega);
    return std::polar(s.q_amp / std::sqrt(b->T), b->omega / b->T + b->theta);
  }
  return 0.0;
}

namespace {

// m_d f_d(t)
Complex scaled_forcing_at(const InitialDatum& datum, Dim d, double t) {
  if (t < 0.0) throw DomainError("forcing: t must be nonnegative");
  if (d == Dim::One) return free_evolution_at_origin(datum, d, t);
  if (t == 0.0) return initial_charge(datum, d);
  if (d == Dim::Three) {
    if (const auto* g = std::get_if<GreenDatum>(&datum)) {
      Complex out = g->q0 * green3_forcing(g->lambda, t);
      if (g->regular.amplitude != 0.0) {
        const InitialDatum reg = g->regular;
        out += m_const(d) * abel_convolution([&](double s) { return free_evolution_at_origin(reg, d, s); }, t);
      }
      return out;
    }
    if (const auto* b = std::get_if<BoundStateDatum>(&datum)) {
      return std::polar(bound_state(d, b->beta, b->sigma, b->omega).q_amp, b->phase) * green3_forcing(b->omega, t);
    }
    return m_const(d) * abel_convolution([&](double s) { return free_evolution_at_origin(datum, d, s); }, t);
  }
  return m_const(d) * k2_convolution([&](double s) { return free_evolution_at_origin(datum, d, s); }, t);
}

std::vector<Complex> scaled_forcing(const InitialDatum& datum, Dim d, double T, double h) {
  validate_datum(datum, d);
  const std::size_t N = step_count(T, h);
  std::vector<Complex> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n) out[n] = scaled_forcing_at(datum, d, static_cast<double>(n) * h);
  return out;
}

}  // namespace

Complex forcing_at(const InitialDatum& datum, Dim d, double t) {
  return scaled_forcing_at(datum, d, t) / m_const(d);
}

std::vector<Complex> forcing(const InitialDatum& datum, Dim d, double T, double h) {
  std::vector<Complex> out = scaled_forcing(datum, d, T, h);
  const Complex m = m_const(d);
  for (auto& v : out) v /= m;
  return out;
}

std::size_t step_count(double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) throw ConstraintError("time grid: T and h must be positive");
  const double ratio = T / h;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
    throw ConstraintError("time grid: h must divide T (T/h = " + std::to_string(ratio) + ")");
  }
  return static_cast<std::size_t>(n);
}

std::shared_ptr<const ProductWeights> product_weights(Dim d, double h, std::size_t N) {
  if (!(h > 0.0)) throw ConstraintError("product_weights: h must be positive");
  if (d != Dim::Two) {
    // Data off the boundary condition give q ~ q0 + a sqrt(t); the linear
    // interpolant alone then caps the order near 1.
    auto pw = assemble(abel_moments(h, N), h);
    const auto& w = pw->w;
    std::vector<double> sq(N + 1);
    for (std::size_t k = 0; k <= N; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    pw->start.resize(N);
    for (std::size_t n = 1; n <= N; ++n) {
      // int_0^t (t-s)^{-1/2} sqrt(s) ds = pi t / 2
      double rule = 0.0;
      for (std::size_t m = 0; m < n; ++m) rule += w[m] * sq[n - m];
      pw->start[n - 1] = 0.5 * kPi * static_cast<double>(n) * std::sqrt(h) - rule;
    }
    return pw;
  }
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const ProductWeights>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({h, N});
    if (it != cache.end()) return it->second;
  }
  auto pw = assemble(k2_moments(h, N), h);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(h, N), pw);
  return pw;
}

ChargeTrajectory solve_linear(const DeltaModel& model, const InitialDatum& datum, double T, double h) {
  const double alpha = model.linear_coupling().alpha;
  ChargeTrajectory tr = run(
      model.dim(), datum, T, h, [alpha](double) { return alpha; }, true, std::numeric_limits<double>::infinity(), 0);
  tr.alpha = alpha;
  tr.linear = true;
  return tr;
}

ChargeTrajectory solve_nonlinear(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                                 const NonlinearOptions& options) {
  const auto& nl = model.nonlinear_coupling();
  if (!(options.blowup_guard > 0.0)) throw ConstraintError("blow-up guard must be positive");
  AlphaFn alpha = options.alpha_override;
  if (!alpha) {
    const double beta = nl.beta;
    const double two_sigma = 2.0 * nl.sigma;
    alpha = [beta, two_sigma](double r) { return beta * std::pow(r, two_sigma); };
  }
  ChargeTrajectory tr = run(model.dim(), datum, T, h, alpha, false, options.blowup_guard, options.max_iterations);
  tr.beta = nl.beta;
  tr.sigma = nl.sigma;
  tr.linear = false;
  return tr;
}

ChargeTrajectory solve(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                       const NonlinearOptions& options) {
  return model.is_linear() ? solve_linear(model, datum, T, h) : solve_nonlinear(model, datum, T, h, options);
}

}  // namespace deltanls
