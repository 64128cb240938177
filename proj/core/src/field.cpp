#include "deltanls/field.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "deltanls/quadrature.hpp"
#include "deltanls/specfun.hpp"

namespace deltanls {

namespace {

const Complex kPhi = std::sqrt(kPi) * eighth_turn();  // sqrt(pi) e^{i pi/4}

// Antiderivatives F_p(u) of u^p exp(i s^2 / u), normalized so that F_p(0) = 0, for the two
// powers needed by the value (lo, lo + 1) and by the gradient after the x / (2u) factor.
// Gradient entries already include the factor i x / 2 (i r / 2 in d = 2, 3).
struct CellPrimitives {
  Complex v_lo, v_hi;  // value family
  Complex g_lo, g_hi;  // gradient family
};

CellPrimitives primitives(Dim d, double x, double u, bool want_gradient) {
  if (u == 0.0) return {};
  const double s = 0.5 * std::abs(x);
  const double a = s * s;
  const Complex e = std::polar(1.0, a / u);
  const double su = std::sqrt(u);
  CellPrimitives p;
  if (d == Dim::Two) {
    const Complex e1 = expint_e1(Complex(0.0, -a / u));
    p.v_lo = e1;                        // F_{-1}
    p.v_hi = u * e + kI * a * e1;       // F_0
    if (want_gradient) {
      p.g_lo = -2.0 * e / std::abs(x);  // (i r / 2) F_{-2}
      p.g_hi = kI * (0.5 * std::abs(x)) * e1;
    }
    return p;
  }
  // erfc(e^{-i pi/4} s / sqrt(u)) = e^{i a/u} w(e^{i pi/4} s / sqrt(u))
  const Complex E = e * faddeeva_w(eighth_turn() * (s / su));
  const Complex f_m12 = 2.0 * su * e + 2.0 * kI * kPhi * s * E;  // F_{-1/2}
  const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  if (d == Dim::One) {
    p.v_lo = f_m12;
    p.v_hi = (2.0 / 3.0) * (u * su * e + kI * a * f_m12);  // F_{1/2}
    if (want_gradient) {
      p.g_lo = kI * sgn * kPhi * E;            // (i x / 2) F_{-3/2}
      p.g_hi = kI * (0.5 * x) * f_m12;
    }
    return p;
  }
  const Complex f_m32 = kPhi * E / s;
  p.v_lo = f_m32;
  p.v_hi = f_m12;
  if (want_gradient) {
    const double r = std::abs(x);
    p.g_lo = (2.0 / r) * (-0.5 * f_m32 - e / su);  // (i r / 2) F_{-5/2}
    p.g_hi = kI * (0.5 * r) * f_m32;
  }
  return p;
}

// (4 pi i)^{-d/2}, principal branch
Complex propagator_prefactor(Dim d) {
  const int k = to_int(d);
  return std::pow(4.0 * kPi, -0.5 * k) * std::polar(1.0, -0.25 * kPi * k);
}

std::vector<Complex> densities(const ChargeTrajectory& traj) {
  std::vector<Complex> g(traj.q.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (traj.d != Dim::One) {
      g[j] = traj.q[j];
    } else {
      const double alpha = traj.linear ? traj.alpha : traj.beta * std::pow(std::abs(traj.q[j]), 2.0 * traj.sigma);
      g[j] = kappa(Dim::One, alpha) * traj.q[j];
    }
  }
  return g;
}

struct MemoryValue {
  Complex value;
  Complex gradient;
};

// i int_0^{t_n} U(u, x) g(t_n - u) du with g piecewise linear on the trajectory grid.
MemoryValue memory_term(const ChargeTrajectory& traj, const std::vector<Complex>& g, std::size_t n, double x,
                        bool want_gradient) {
  if (n == 0) return {};
  const double h = traj.h;
  CellPrimitives prev = primitives(traj.d, x, 0.0, want_gradient);
  Complex val = 0.0;
  Complex grad = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u0 = static_cast<double>(j) * h;
    const CellPrimitives next = primitives(traj.d, x, static_cast<double>(j + 1) * h, want_gradient);
    const Complex ga = g[n - j];
    const Complex slope = (g[n - j - 1] - ga) / h;
    const Complex dlo = next.v_lo - prev.v_lo;
    val += ga * dlo + slope * ((next.v_hi - prev.v_hi) - u0 * dlo);
    if (want_gradient) {
      const Complex glo = next.g_lo - prev.g_lo;
      grad += ga * glo + slope * ((next.g_hi - prev.g_hi) - u0 * glo);
    }
    prev = next;
  }
  const Complex c = kI * propagator_prefactor(traj.d);
  return {c * val, c * grad};
}

std::size_t index_of(const ChargeTrajectory& traj, double t) {
  const double r = t / traj.h;
  const double n = std::round(r);
  if (!(t >= 0.0) || std::abs(r - n) > 1e-9 * std::max(1.0, n)) {
    throw DomainError("reconstruct: t = " + std::to_string(t) + " is not on the trajectory grid");
  }
  return static_cast<std::size_t>(n);
}

void check_point(Dim d, double x) {
  if (d != Dim::One && !(x > 0.0)) throw DomainError("reconstruct: radial points must be positive");
}

double radial_weight(Dim d, double r) {
  switch (d) {
    case Dim::One:
      return 1.0;
    case Dim::Two:
      return 2.0 * kPi * r;
    case Dim::Three:
      return 4.0 * kPi * r * r;
  }
  return 0.0;
}

void append_gauss_panel(SpatialGrid& grid, double a, double b, int order) {
  const quad::GaussRule& rule = quad::gauss_legendre(static_cast<std::size_t>(order));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    grid.points.push_back(mid + half * rule.nodes[k]);
    grid.weights.push_back(half * rule.weights[k]);
  }
}

Complex radiation_coefficient(const ChargeTrajectory& traj, const InitialDatum& datum) {
  if (traj.q.empty()) return 0.0;
  if (traj.d == Dim::One) {
    if (std::holds_alternative<Grid1D>(datum)) return densities(traj)[0];  // trigonometric data are smooth
    constexpr double eps = 1e-12;
    const Complex jump =
        free_evolution_gradient(datum, Dim::One, 0.0, eps) - free_evolution_gradient(datum, Dim::One, 0.0, -eps);
    return densities(traj)[0] + jump;
  }
  if (traj.d == Dim::Three) {
    // q = q0 + c sqrt(t) + O(t) with c = F'_{1/2} - 2 c_3(alpha(q0)) q0
    constexpr double tau = 1e-10;
    const Complex q0 = traj.q[0];
    const double alpha0 = traj.linear ? traj.alpha : traj.beta * std::pow(std::abs(q0), 2.0 * traj.sigma);
    const Complex slope = m_const(Dim::Three) * (forcing_at(datum, Dim::Three, tau) - forcing_at(datum, Dim::Three, 0.0));
    return slope / std::sqrt(tau) - 2.0 * coupling_const(Dim::Three, alpha0) * q0;
  }
  return 0.0;
}

struct Tails {
  double mass = 0.0;
  double kinetic = 0.0;
  double moment = 0.0;
};

Tails far_field_tails(const FieldSnapshot& snap) {
  const double L = snap.grid.extent;
  if (!(L > 0.0) || snap.d == Dim::Two) return {};
  const double c2 = std::norm(snap.radiation);
  const double t = snap.t;
  const double t3 = t * t * t;
  if (snap.d == Dim::One) {
    return {8.0 * t3 * c2 / (3.0 * kPi * L * L * L), 2.0 * t * c2 / (kPi * L), 8.0 * t3 * c2 / (kPi * L)};
  }
  return {t3 * c2 / (3.0 * kPi * L * L * L), t * c2 / (4.0 * kPi * L), t3 * c2 / (kPi * L)};
}

}  // namespace

SpatialGrid gauss_grid(Dim d, double extent, int panels, int order) {
  if (!(extent > 0.0) || panels < 1 || order < 1) throw ConstraintError("gauss_grid: bad parameters");
  SpatialGrid grid;
  grid.d = d;
  const double w = extent / panels;
  // the panel next to the origin is refined dyadically: at early times the field varies on the
  // scale sqrt(t) there, and in d = 2, 3 it is singular
  const int levels = d == Dim::One ? 16 : 30;
  std::vector<double> breaks{0.0};
  for (int k = levels; k >= 1; --k) breaks.push_back(std::ldexp(w, -k));
  for (int k = 1; k <= panels; ++k) breaks.push_back(k * w);
  if (d == Dim::One) {
    for (std::size_t k = breaks.size() - 1; k > 0; --k) append_gauss_panel(grid, -breaks[k], -breaks[k - 1], order);
    grid.extent = extent;
  }
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) append_gauss_panel(grid, breaks[k], breaks[k + 1], order);
  grid.extent = extent;
  return grid;
}

SpatialGrid uniform_grid(Dim d, double extent, std::size_t n) {
  if (!(extent > 0.0) || n < 2) throw ConstraintError("uniform_grid: bad parameters");
  SpatialGrid grid;
  grid.d = d;
  const double x0 = d == Dim::One ? -extent : extent / static_cast<double>(n);
  const double dx = (extent - x0) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    grid.points.push_back(x0 + static_cast<double>(k) * dx);
    grid.weights.push_back(k == 0 || k + 1 == n ? 0.5 * dx : dx);
  }
  grid.extent = extent;
  return grid;
}

Complex field_value(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n, double x) {
  if (n >= traj.q.size()) throw DomainError("reconstruct: time past the resolved trajectory");
  check_point(traj.d, x);
  const auto g = densities(traj);
  return free_evolution(datum, traj.d, traj.time(n), x) + memory_term(traj, g, n, x, false).value;
}

Complex field_gradient(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n, double x) {
  if (n >= traj.q.size()) throw DomainError("reconstruct: time past the resolved trajectory");
  check_point(traj.d, x);
  const auto g = densities(traj);
  return free_evolution_gradient(datum, traj.d, traj.time(n), x) + memory_term(traj, g, n, x, true).gradient;
}

FieldSnapshot reconstruct(const ChargeTrajectory& traj, const InitialDatum& datum, std::size_t n,
                          const SpatialGrid& grid, const ReconstructOptions& options) {
  if (n >= traj.q.size()) throw DomainError("reconstruct: time past the resolved trajectory");
  if (grid.d != traj.d) throw ConstraintError("reconstruct: grid dimension differs from the trajectory");
  for (double x : grid.points) check_point(traj.d, x);

  FieldSnapshot snap;
  snap.t = traj.time(n);
  snap.d = traj.d;
  snap.grid = grid;
  snap.charge = traj.q[n];
  snap.lambda = options.lambda;
  snap.radiation = radiation_coefficient(traj, datum);
  const std::size_t P = grid.points.size();
  snap.values.resize(P);
  if (options.gradients) snap.gradients.resize(P);

  const auto g = densities(traj);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double x = grid.points[k];
      const MemoryValue m = memory_term(traj, g, n, x, options.gradients);
      snap.values[k] = free_evolution(datum, traj.d, snap.t, x) + m.value;
      if (options.gradients) snap.gradients[k] = free_evolution_gradient(datum, traj.d, snap.t, x) + m.gradient;
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(P, 1)));
  if (threads <= 1) {
    work(0, P);
    return snap;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (P + threads - 1) / threads;
  for (unsigned i = 0; i < threads; ++i) {
    pool.emplace_back([&, i] {
      try {
        work(std::min(P, i * chunk), std::min(P, (i + 1) * chunk));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return snap;
}

FieldSnapshot reconstruct(const ChargeTrajectory& traj, const InitialDatum& datum, double t,
                          const SpatialGrid& grid, const ReconstructOptions& options) {
  return reconstruct(traj, datum, index_of(traj, t), grid, options);
}

double energy_alpha(const ChargeTrajectory& traj, Complex q) {
  if (traj.linear) return traj.alpha;
  return traj.beta * std::pow(std::abs(q), 2.0 * traj.sigma) / (traj.sigma + 1.0);
}

double mass(const FieldSnapshot& snap) {
  double m = 0.0;
  for (std::size_t k = 0; k < snap.values.size(); ++k) {
    m += snap.grid.weights[k] * radial_weight(snap.d, snap.grid.points[k]) * std::norm(snap.values[k]);
  }
  return m + far_field_tails(snap).mass;
}

double moment_of_inertia(const FieldSnapshot& snap) {
  double m = 0.0;
  for (std::size_t k = 0; k < snap.values.size(); ++k) {
    const double x = snap.grid.points[k];
    m += snap.grid.weights[k] * radial_weight(snap.d, x) * x * x * std::norm(snap.values[k]);
  }
  return m + far_field_tails(snap).moment;
}

double energy(const ChargeTrajectory& traj, const FieldSnapshot& snap, double lambda) {
  if (snap.gradients.size() != snap.values.size()) throw ConstraintError("energy: snapshot has no gradients");
  if (!(lambda > 0.0)) throw ConstraintError("energy: lambda must be positive");
  const Complex q = snap.charge;
  const double q2 = std::norm(q);
  if (snap.d == Dim::One) {
    double kinetic = 0.0;
    for (std::size_t k = 0; k < snap.values.size(); ++k) kinetic += snap.grid.weights[k] * std::norm(snap.gradients[k]);
    const double coupling = traj.linear ? 0.5 * traj.alpha * q2
                                        : traj.beta * std::pow(q2, traj.sigma + 1.0) / (2.0 * traj.sigma + 2.0);
    return 0.5 * (kinetic + far_field_tails(snap).kinetic) + coupling;
  }
  double kinetic = 0.0;
  double singular_mass = 0.0;  // ||psi||^2 - ||phi||^2
  for (std::size_t k = 0; k < snap.values.size(); ++k) {
    const double r = snap.grid.points[k];
    const double w = snap.grid.weights[k] * radial_weight(snap.d, r);
    const Complex phi = snap.values[k] - q * green(snap.d, lambda, r);
    const Complex dphi = snap.gradients[k] - q * green_derivative(snap.d, lambda, r);
    kinetic += w * std::norm(dphi);
    singular_mass += w * (std::norm(snap.values[k]) - std::norm(phi));
  }
  kinetic += far_field_tails(snap).kinetic;
  return 0.5 * kinetic - 0.5 * lambda * singular_mass + 0.5 * theta(snap.d, lambda, energy_alpha(traj, q)) * q2;
}

double energy(const ChargeTrajectory& traj, const FieldSnapshot& snap) { return energy(traj, snap, snap.lambda); }

double virial_rhs(double E0, Complex q, double beta, double sigma, Dim d) {
  const double y = std::norm(q);
  double g = 0.0;
  if (d == Dim::Two) {
    g = 2.0 * (1.0 / kPi - 4.0 * beta * sigma * std::pow(y, sigma) / (sigma + 1.0)) * y;
  } else {
    g = 4.0 * beta * (sigma - 1.0) / (sigma + 1.0) * std::pow(y, sigma + 1.0);
  }
  return 16.0 * E0 + g;
}

RateFit blowup_rate_fit(const ChargeTrajectory& traj, std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(hi > lo)) throw ConstraintError("blowup_rate_fit: empty window");
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t n = 0; n < traj.q.size(); ++n) {
    const double t = traj.time(n);
    if (t < lo - 1e-12 || t > hi + 1e-12) continue;
    ts.push_back(t);
    ys.push_back(std::log(std::abs(traj.q[n])));
  }
  if (ts.size() < 4) throw NumericalError("blowup_rate_fit: fewer than 4 samples in the window");
  for (std::size_t k = 1; k < ys.size(); ++k) {
    if (!(ys[k] > ys[k - 1])) throw NumericalError("blowup_rate_fit: |q| is not increasing on the window");
  }
  const double t_last = ts.back();
  const double span = t_last - ts.front();
  const double m = static_cast<double>(ts.size());

  struct Line {
    double slope, intercept, sse;
  };
  auto fit = [&](double T) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double x = std::log(T - ts[k]);
      sx += x;
      sy += ys[k];
      sxx += x * x;
      sxy += x * ys[k];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    double sse = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double r = ys[k] - intercept - slope * std::log(T - ts[k]);
      sse += r * r;
    }
    return Line{slope, intercept, sse};
  };
  // T = t_last + exp(v); coarse scan then Brent on the best bracket
  const double v_lo = std::log(1e-6 * span);
  const double v_hi = std::log(100.0 * span);
  constexpr int kScan = 400;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kScan; ++k) {
    const double v = v_lo + (v_hi - v_lo) * k / kScan;
    const double sse = fit(t_last + std::exp(v)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = k;
    }
  }
  const double step = (v_hi - v_lo) / kScan;
  const double a = v_lo + std::max(0, best - 1) * step;
  const double b = v_lo + std::min(kScan, best + 1) * step;
  const auto r = boost::math::tools::brent_find_minima([&](double v) { return fit(t_last + std::exp(v)).sse; }, a, b,
                                                       std::numeric_limits<double>::digits / 2);
  const double T = t_last + std::exp(r.first);
  const Line line = fit(T);
  return RateFit{T, line.slope, std::sqrt(line.sse / m), ts.size()};
}

double datum_gradient_norm_sq(const InitialDatum& datum) {
  if (const auto* g = std::get_if<Gaussian>(&datum)) return std::norm(g->amplitude) * std::sqrt(kPi) / (2.0 * g->width);
  if (const auto* b = std::get_if<BoundStateDatum>(&datum)) {
    const BoundState s = bound_state(Dim::One, b->beta, b->sigma, b->omega);
    return s.q_amp * s.q_amp / (4.0 * std::sqrt(s.omega));
  }
  auto integrand = [&](double x) { return std::norm(free_evolution_gradient(datum, Dim::One, 0.0, x)); };
  const quad::Options opt{1e-15, 1e-11, 40};
  if (const auto* g = std::get_if<Grid1D>(&datum)) {
    const double a = g->x0();
    const double b = a + g->dx() * static_cast<double>(g->values().size() - 1);
    std::vector<double> pts{a, b};
    if (a < 0.0 && b > 0.0) pts = {a, 0.0, b};
    return quad::integrate(integrand, pts, opt);
  }
  // x = z / (1 - z^2) maps (-1, 1) onto the line; split at the possible kink at 0
  auto mapped = [&](double z) {
    const double den = 1.0 - z * z;
    return integrand(z / den) * (1.0 + z * z) / (den * den);
  };
  return quad::integrate(mapped, std::vector<double>{-1.0, 0.0, 1.0}, opt);
}

double dichotomy_eta(const InitialDatum& datum, const DeltaModel& model) {
  if (model.dim() != Dim::One || model.is_linear()) throw ConstraintError("dichotomy_eta: needs a d = 1 nonlinear model");
  const auto& c = model.nonlinear_coupling();
  if (c.beta != -1.0) throw ConstraintError("dichotomy_eta: requires beta = -1");
  if (!(c.sigma > 1.0)) throw ConstraintError("dichotomy_eta: requires sigma > 1");
  validate_datum(datum, Dim::One);
  const double sc = sigma_c(c.sigma);
  const double power = (1.0 - sc) / (2.0 * sc);  // on the mass, i.e. half the norm power
  const BoundStateDatum ref{-1.0, c.sigma, 1.0, 0.0};
  const double num = std::pow(datum_mass(datum, Dim::One), power) * std::sqrt(datum_gradient_norm_sq(datum));
  const double den = std::pow(datum_mass(ref, Dim::One), power) * std::sqrt(datum_gradient_norm_sq(ref));
  return num / den;
}

}  // namespace deltanls
