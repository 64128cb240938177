#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deltanls/analytic.hpp"
#include "deltanls/charge.hpp"
#include "deltanls/specfun.hpp"

namespace {

using namespace deltanls;
constexpr double pi = std::numbers::pi;

double sup_diff(const std::vector<Complex>& a, const std::vector<Complex>& b, std::size_t stride_b = 1) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size() && n * stride_b < b.size(); ++n) m = std::max(m, std::abs(a[n] - b[n * stride_b]));
  return m;
}

TEST(Kernel, KnownValues) {
  EXPECT_DOUBLE_EQ(kernel(Dim::One, 4.0), 0.5);
  EXPECT_DOUBLE_EQ(kernel(Dim::Three, 1.0), 1.0);
  EXPECT_NEAR(kernel(Dim::Two, 1.0), 2.8077702, 1e-7);
}

TEST(Constants, CouplingAndM) {
  const Complex c1 = coupling_const(Dim::One, 1.0);
  EXPECT_NEAR(c1.real(), 0.1994711, 1e-7);
  EXPECT_NEAR(c1.imag(), 0.1994711, 1e-7);
  const Complex c3 = coupling_const(Dim::Three, 1.0);
  EXPECT_NEAR(c3.real(), 5.0132565, 1e-7);
  EXPECT_NEAR(c3.imag(), 5.0132565, 1e-7);
  const Complex c2 = coupling_const(Dim::Two, 0.0);
  EXPECT_NEAR(c2.real(), -0.2318630, 1e-7);
  EXPECT_NEAR(c2.imag(), -1.5707963, 1e-7);
  EXPECT_EQ(coupling_const(Dim::One, 0.0), Complex(0.0));

  EXPECT_EQ(m_const(Dim::One), Complex(1.0));
  EXPECT_NEAR(std::abs(m_const(Dim::Two) - 4.0 * pi), 0.0, 1e-12);
  EXPECT_LT(std::abs(m_const(Dim::Three) - coupling_const(Dim::Three, 1.0)), 1e-14);
}

TEST(Forcing, InitialValues) {
  const Gaussian g{1.0, 1.0};
  EXPECT_LT(std::abs(forcing_at(g, Dim::One, 0.0) - 1.0), 1e-14);
  EXPECT_EQ(forcing_at(g, Dim::Three, 0.0), Complex(0.0));
  // d = 3, small t: int_0^t (t-s)^{-1/2} (U(s) psi0)(0) ds ~ 2 sqrt(t)
  const double t = 1e-6;
  EXPECT_LT(std::abs(forcing_at(g, Dim::Three, t) - 2.0 * std::sqrt(t)), 1e-5 * 2.0 * std::sqrt(t));
}

TEST(Forcing, GridAgreesWithPointwise) {
  const VanishingGaussian v{Complex(1.0, 0.2), 1.0};
  for (int di = 1; di <= 3; ++di) {
    const Dim d = dim_from_int(di);
    const auto f = forcing(v, d, 0.5, 0.05);
    ASSERT_EQ(f.size(), 11u);
    for (std::size_t n = 0; n < f.size(); ++n) {
      EXPECT_LT(std::abs(f[n] - forcing_at(v, d, 0.05 * static_cast<double>(n))), 1e-10) << "d=" << di << " n=" << n;
    }
  }
}

TEST(InitialCharge, PerDimension) {
  EXPECT_EQ(initial_charge(Gaussian{Complex(0.5, 1.0), 2.0}, Dim::One), Complex(0.5, 1.0));
  EXPECT_EQ(initial_charge(GreenDatum{Complex(2.0, -1.0), 1.0, Gaussian{0.0, 1.0}}, Dim::Three), Complex(2.0, -1.0));
  EXPECT_EQ(initial_charge(Gaussian{1.0, 1.0}, Dim::Three), Complex(0.0));
}

TEST(StepCount, DividesExactly) {
  EXPECT_EQ(step_count(1.0, 1e-3), 1000u);
  EXPECT_THROW(step_count(1.0, 0.3), ConstraintError);
  EXPECT_THROW(step_count(1.0, -0.1), ConstraintError);
}

TEST(SolveLinear, ZeroCouplingReproducesForcing) {
  const auto traj = solve_linear(DeltaModel::linear(Dim::One, 0.0), Gaussian{1.0, 1.0}, 1.0, 1e-2);
  ASSERT_EQ(traj.q.size(), traj.forcing.size());
  for (std::size_t n = 0; n < traj.q.size(); ++n) EXPECT_EQ(traj.q[n], traj.forcing[n]);
}

TEST(SolveLinear, EigenstateRotatesInPhase) {
  // alpha = -2: eigenvalue -1, eigenstate G_1 normalized, q(t) = q(0) e^{i t}
  const double lambda = 1.0;
  const GreenDatum datum{eigenstate_norm_const(Dim::One, lambda), lambda, Gaussian{0.0, 1.0}};
  const auto traj = solve_linear(DeltaModel::linear(Dim::One, -2.0), datum, 1.0, 1e-3);
  const Complex q0 = traj.q.front();
  double err = 0.0;
  for (std::size_t n = 0; n < traj.q.size(); ++n) {
    err = std::max(err, std::abs(traj.q[n] - q0 * std::exp(Complex(0.0, traj.time(n)))) / std::abs(q0));
  }
  EXPECT_LT(err, 1e-4);
}

TEST(SolveLinear, ThreeDimensionalSelfConvergence) {
  const DeltaModel model = DeltaModel::linear(Dim::Three, 1.0);
  const Gaussian g{1.0, 1.0};
  // |c_3| ~ 7 puts the asymptotic regime below h ~ 5e-4
  const auto q1 = solve_linear(model, g, 1.0, 2.5e-4).q;
  const auto q2 = solve_linear(model, g, 1.0, 1.25e-4).q;
  const auto q3 = solve_linear(model, g, 1.0, 6.25e-5).q;
  const double e1 = sup_diff(q1, q2, 2);
  const double e2 = sup_diff(q2, q3, 2);
  EXPECT_GE(e1 / e2, 2.5) << e1 << " " << e2;
}

TEST(SolveLinear, GaugeCovariance) {
  const DeltaModel model = DeltaModel::linear(Dim::Three, -0.3);
  const Complex phase = std::polar(1.0, 0.7);
  const auto a = solve_linear(model, Gaussian{1.0, 1.0}, 0.5, 1e-2);
  const auto b = solve_linear(model, Gaussian{phase, 1.0}, 0.5, 1e-2);
  for (std::size_t n = 0; n < a.q.size(); ++n) EXPECT_LT(std::abs(b.q[n] - phase * a.q[n]), 1e-13);
}

TEST(SolveNonlinear, DefocusingRunCompletes) {
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, 1.0, 1.0), Gaussian{2.0, 1.0}, 2.0, 1e-2);
  EXPECT_FALSE(traj.blown_up);
  EXPECT_EQ(traj.q.size(), 201u);
}

TEST(SolveNonlinear, StandingWaveCharge) {
  const DeltaModel model = DeltaModel::nonlinear(Dim::One, -1.0, 1.0);
  const auto traj = solve_nonlinear(model, BoundStateDatum{-1.0, 1.0, 1.0, 0.0}, 1.0, 1e-3);
  ASSERT_FALSE(traj.blown_up);
  const Complex q0 = traj.q.front();
  EXPECT_NEAR(std::abs(q0), std::sqrt(2.0), 1e-12);
  double err = 0.0;
  for (std::size_t n = 0; n < traj.q.size(); ++n) {
    err = std::max(err, std::abs(traj.q[n] - q0 * std::exp(Complex(0.0, traj.time(n)))) / std::abs(q0));
  }
  EXPECT_LT(err, 1e-3);
}

TEST(SolveNonlinear, ConstantAlphaHookMatchesLinearSolver) {
  const double alpha = -0.7;
  NonlinearOptions opt;
  opt.alpha_override = [alpha](double) { return alpha; };
  for (int di = 1; di <= 3; ++di) {
    const Dim d = dim_from_int(di);
    const auto lin = solve_linear(DeltaModel::linear(d, alpha), Gaussian{1.0, 1.0}, 0.2, 1e-2);
    const auto non = solve_nonlinear(DeltaModel::nonlinear(d, 1.0, 1.0), Gaussian{1.0, 1.0}, 0.2, 1e-2, opt);
    ASSERT_EQ(lin.q.size(), non.q.size());
    for (std::size_t n = 0; n < lin.q.size(); ++n) EXPECT_EQ(lin.q[n], non.q[n]) << "d=" << di << " n=" << n;
  }
}

TEST(SolveNonlinear, ExactBlowupGrowsAndTruncates) {
  NonlinearOptions opt;
  opt.blowup_guard = 5.0;
  const BlowupDatum datum{-1.0, 1.0, 0.0, 1.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), datum, 0.99, 1e-4, opt);
  EXPECT_TRUE(traj.blown_up);
  EXPECT_LT(traj.last_time(), 0.99);
  // up to t = 0.5 the charge follows the closed form
  for (std::size_t n = 0; n <= 5000; n += 500) {
    const Complex exact = exact_blowup_charge(Dim::One, -1.0, 1.0, 0.0, 1.0, traj.time(n));
    EXPECT_LT(std::abs(traj.q[n] - exact), 1e-2 * std::abs(exact)) << "n=" << n;
  }
}

TEST(SolveNonlinear, GaugeCovariance) {
  const DeltaModel model = DeltaModel::nonlinear(Dim::Three, -1.0, 1.0);
  const Complex phase = std::polar(1.0, -1.3);
  const auto a = solve_nonlinear(model, GreenDatum{0.5, 1.0, Gaussian{0.0, 1.0}}, 0.3, 1e-2);
  const auto b = solve_nonlinear(model, GreenDatum{0.5 * phase, 1.0, Gaussian{0.0, 1.0}}, 0.3, 1e-2);
  for (std::size_t n = 0; n < a.q.size(); ++n) EXPECT_LT(std::abs(b.q[n] - phase * a.q[n]), 1e-13);
}

TEST(SolveNonlinear, RejectsBadGuard) {
  NonlinearOptions opt;
  opt.blowup_guard = 0.0;
  EXPECT_THROW(solve_nonlinear(DeltaModel::nonlinear(Dim::One, 1.0, 1.0), Gaussian{}, 1.0, 0.1, opt), ConstraintError);
}

}  // namespace
