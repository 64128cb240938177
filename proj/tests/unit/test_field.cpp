#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "deltanls/analytic.hpp"
#include "deltanls/field.hpp"

namespace {

using namespace deltanls;
constexpr double pi = std::numbers::pi;

Complex free_gaussian_1d(double t, double x) {
  const Complex s = Complex(1.0, 2.0 * t);
  return std::exp(-x * x / (2.0 * s)) / std::sqrt(s);
}

TEST(Reconstruct, ZeroDatumGivesZeroField) {
  const Gaussian zero{0.0, 1.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), zero, 0.1, 1e-2);
  const auto snap = reconstruct(traj, zero, std::size_t{10}, gauss_grid(Dim::One, 5.0, 8, 8));
  for (const auto& v : snap.values) EXPECT_EQ(v, Complex(0.0));
  EXPECT_EQ(mass(snap), 0.0);
  EXPECT_EQ(energy(traj, snap), 0.0);
  EXPECT_EQ(moment_of_inertia(snap), 0.0);
}

TEST(Reconstruct, FreeGaussian) {
  const Gaussian g{1.0, 1.0};
  const auto traj = solve_linear(DeltaModel::linear(Dim::One, 0.0), g, 0.5, 1e-2);
  SpatialGrid grid = uniform_grid(Dim::One, 4.0, 41);
  const auto snap = reconstruct(traj, g, 0.5, grid);
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    EXPECT_LT(std::abs(snap.values[k] - free_gaussian_1d(0.5, grid.points[k])), 1e-6) << grid.points[k];
  }
}

TEST(Reconstruct, StandingWaveKeepsItsModulus) {
  const BoundStateDatum b{-1.0, 1.0, 1.0, 0.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), b, 0.5, 1e-3);
  const SpatialGrid grid = uniform_grid(Dim::One, 5.0, 21);
  const auto snap = reconstruct(traj, b, 0.5, grid);
  const BoundState s = bound_state(Dim::One, -1.0, 1.0, 1.0);
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    EXPECT_NEAR(std::abs(snap.values[k]), bound_state_profile(s, grid.points[k]), 1e-3) << grid.points[k];
  }
}

TEST(Reconstruct, RejectsTimesPastTruncation) {
  NonlinearOptions opt;
  opt.blowup_guard = 5.0;
  const BlowupDatum datum{-1.0, 1.0, 0.0, 1.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), datum, 0.99, 1e-4, opt);
  ASSERT_TRUE(traj.blown_up);
  EXPECT_THROW(reconstruct(traj, datum, 0.99, uniform_grid(Dim::One, 1.0, 5)), DomainError);
}

TEST(Observables, GaussianAtTimeZero) {
  const Gaussian g{1.0, 1.0};
  const auto traj = solve_linear(DeltaModel::linear(Dim::One, 0.0), g, 0.1, 1e-2);
  const auto snap = reconstruct(traj, g, std::size_t{0}, gauss_grid(Dim::One, 12.0, 32, 12));
  EXPECT_NEAR(mass(snap), std::sqrt(pi), 1e-12);
  EXPECT_NEAR(moment_of_inertia(snap), 0.8862269, 1e-7);
  // 1/2 ||psi'||^2 = sqrt(pi) / 4
  EXPECT_NEAR(energy(traj, snap), std::sqrt(pi) / 4.0, 1e-12);
}

TEST(Observables, StandingWaveEnergyVanishes) {
  const BoundStateDatum b{-1.0, 1.0, 1.0, 0.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), b, 0.2, 1e-3);
  const auto snap = reconstruct(traj, b, 0.2, gauss_grid(Dim::One, 30.0, 64, 12));
  EXPECT_NEAR(energy(traj, snap), 0.0, 1e-4);
  EXPECT_NEAR(mass(snap), 2.0, 1e-4);
}

TEST(Observables, ThreeDimensionalStandingWaveMass) {
  const double beta = -1.0 / (4.0 * pi);
  const BoundStateDatum b{beta, 1.0, 1.0, 0.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::Three, beta, 1.0), b, 0.1, 1e-3);
  const auto snap = reconstruct(traj, b, 0.1, gauss_grid(Dim::Three, 30.0, 64, 12));
  EXPECT_NEAR(mass(snap), bound_mass(bound_state(Dim::Three, beta, 1.0, 1.0)), 1e-4);
}

TEST(Observables, EnergyIndependentOfLambda) {
  const GreenDatum datum{0.5, 1.0, Gaussian{1.0, 1.0}};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::Three, 1.0, 1.0), datum, 0.2, 1e-3);
  const auto snap = reconstruct(traj, datum, 0.2, gauss_grid(Dim::Three, 20.0, 120, 12));
  const double e1 = energy(traj, snap, 1.0);
  const double e2 = energy(traj, snap, 2.0);
  EXPECT_LT(std::abs(e1 - e2), 1e-6 * std::abs(e1));
}

TEST(Virial, RightHandSide) {
  EXPECT_EQ(virial_rhs(0.0, 1.0, -1.0, 1.0, Dim::One), 0.0);
  EXPECT_EQ(virial_rhs(0.0, 2.5, 3.0, 1.0, Dim::Three), 0.0);
  EXPECT_NEAR(virial_rhs(0.0, 1.0, -1.0, 2.0, Dim::Three), -4.0 / 3.0, 1e-15);
  EXPECT_NEAR(virial_rhs(0.0, 1.0, -1.0, 1.0, Dim::Two), 4.6366198, 1e-7);
  EXPECT_NEAR(virial_rhs(0.25, 0.0, -1.0, 2.0, Dim::One), 4.0, 1e-15);
}

TEST(Virial, FreeGaussianMomentIsQuadratic) {
  // free real Gaussian: I(1) - I(0) = I'' / 2 with I'' constant
  const Gaussian g{1.0, 1.0};
  const auto traj = solve_linear(DeltaModel::linear(Dim::One, 0.0), g, 1.0, 1e-2);
  const SpatialGrid grid = gauss_grid(Dim::One, 40.0, 128, 12);
  const auto s0 = reconstruct(traj, g, std::size_t{0}, grid);
  const auto s1 = reconstruct(traj, g, std::size_t{100}, grid);
  const double e0 = energy(traj, s0);
  const double i2 = 2.0 * (moment_of_inertia(s1) - moment_of_inertia(s0));
  EXPECT_NEAR(i2, virial_rhs(e0, 0.0, 1.0, 1.0, Dim::One), 1e-8);
}

TEST(Exponents, SigmaC) {
  EXPECT_DOUBLE_EQ(sigma_c(2.0), 0.75);
  EXPECT_DOUBLE_EQ(blowup_rate_exponent(2.0), 0.125);
  EXPECT_DOUBLE_EQ(sigma_c(1.0), 1.0);
}

TEST(RateFit, ExactBlowup) {
  NonlinearOptions opt;
  const BlowupDatum datum{-1.0, 1.0, 0.0, 1.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), datum, 0.95, 6.25e-5, opt);
  const RateFit fit = blowup_rate_fit(traj, {0.5, 0.95});
  EXPECT_NEAR(fit.exponent, -0.5, 0.05);
  EXPECT_NEAR(fit.T_est, 1.0, 0.01);
}

TEST(RateFit, StandingWaveIsDegenerate) {
  const BoundStateDatum b{-1.0, 1.0, 1.0, 0.0};
  const auto traj = solve_nonlinear(DeltaModel::nonlinear(Dim::One, -1.0, 1.0), b, 1.0, 1e-2);
  EXPECT_THROW(blowup_rate_fit(traj, {0.5, 0.95}), NumericalError);
}

TEST(Dichotomy, Eta) {
  const DeltaModel model = DeltaModel::nonlinear(Dim::One, -1.0, 2.0);
  EXPECT_NEAR(dichotomy_eta(BoundStateDatum{-1.0, 2.0, 1.0, 0.0}, model), 1.0, 1e-12);
  const Gaussian small{0.1, 1.0};
  EXPECT_LT(dichotomy_eta(small, model), 1.0);
  const auto traj = solve_nonlinear(model, small, 2.0, 1e-2);
  EXPECT_FALSE(traj.blown_up);
  EXPECT_GT(dichotomy_eta(Gaussian{3.0, 0.2}, model), 1.0);
}

TEST(Grids, WeightsIntegratePolynomials) {
  const SpatialGrid g1 = gauss_grid(Dim::One, 2.0, 4, 6);
  double s = 0.0;
  for (std::size_t k = 0; k < g1.points.size(); ++k) s += g1.weights[k] * g1.points[k] * g1.points[k];
  EXPECT_NEAR(s, 16.0 / 3.0, 1e-13);
  const SpatialGrid g3 = gauss_grid(Dim::Three, 1.0, 16, 8);
  double r = 0.0;
  for (std::size_t k = 0; k < g3.points.size(); ++k) {
    EXPECT_GT(g3.points[k], 0.0);
    r += g3.weights[k] * g3.points[k];
  }
  EXPECT_NEAR(r, 0.5, 1e-13);
}

}  // namespace
