#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "deltanls/analytic.hpp"
#include "deltanls/linear_delta.hpp"

namespace {

using namespace deltanls;
constexpr double pi = std::numbers::pi;
constexpr double eg = std::numbers::egamma;

TEST(BoundState, Amplitudes) {
  EXPECT_NEAR(bound_state(Dim::One, -1.0, 1.0, 1.0).q_amp, 2.8284271, 1e-7);
  EXPECT_NEAR(bound_state(Dim::Three, -1.0 / (4.0 * pi), 1.0, 1.0).q_amp, 1.0, 1e-14);
  EXPECT_NEAR(bound_state(Dim::Two, 1.0, 1.0, 4.0 * std::exp(-2.0 * eg - 2.0 * pi)).q_amp, 0.7071068, 1e-7);
}

TEST(BoundState, Admissibility) {
  EXPECT_THROW(bound_state(Dim::One, 1.0, 1.0, 1.0), ConstraintError);
  EXPECT_THROW(bound_state(Dim::One, -1.0, 0.0, 1.0), ConstraintError);
  EXPECT_THROW(bound_state(Dim::Three, -1.0, 1.0, -1.0), ConstraintError);
  // d = 2: beta > 0 needs omega below the threshold, beta < 0 above it
  const double w0 = two_dim_frequency_threshold();
  EXPECT_NEAR(w0, 4.0 * std::exp(-2.0 * eg), 1e-15);
  EXPECT_NO_THROW(bound_state(Dim::Two, 1.0, 1.0, 0.5 * w0));
  EXPECT_THROW(bound_state(Dim::Two, 1.0, 1.0, 2.0 * w0), ConstraintError);
  EXPECT_NO_THROW(bound_state(Dim::Two, -1.0, 1.0, 2.0 * w0));
}

TEST(BoundState, SatisfiesBoundaryCondition) {
  // the profile is q G_omega with theta_omega(alpha(q)) = 0 in d = 2, 3 and the derivative jump
  // -q_amp = alpha u(0) in d = 1
  for (double omega : {0.3, 1.0, 2.5}) {
    const BoundState s1 = bound_state(Dim::One, -1.5, 1.3, omega);
    const double u0 = bound_state_charge(s1);
    EXPECT_NEAR(-s1.q_amp, -1.5 * std::pow(u0, 2.6) * u0, 1e-12 * s1.q_amp);
    const BoundState s3 = bound_state(Dim::Three, -0.2, 0.7, omega);
    EXPECT_NEAR(theta(Dim::Three, omega, -0.2 * std::pow(s3.q_amp, 1.4)), 0.0, 1e-14);
    const BoundState s2 = bound_state(Dim::Two, -0.2, 0.7, 20.0 * omega);
    EXPECT_NEAR(theta(Dim::Two, 20.0 * omega, -0.2 * std::pow(s2.q_amp, 1.4)), 0.0, 1e-14);
  }
}

TEST(BoundState, MassAndEnergy) {
  for (double omega : {0.2, 1.0, 5.0}) {
    const BoundState s1 = bound_state(Dim::One, -1.0, 1.0, omega);
    EXPECT_NEAR(bound_mass(s1), 2.0, 1e-13);
    EXPECT_NEAR(bound_energy(s1), 0.0, 1e-13);
    EXPECT_NEAR(bound_mass(bound_state(Dim::Three, -1.0, 1.0, omega)), 0.0031663, 1e-7);
  }
  const BoundState s = bound_state(Dim::One, -1.0, 1.0, 1.0);
  EXPECT_NEAR(bound_state_charge(s), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bound_state_profile(s, 1.0), std::sqrt(2.0) * std::exp(-1.0), 1e-15);
}

TEST(CriticalMass, KnownValues) {
  EXPECT_NEAR(*critical_mass(Dim::One, -1.0), 2.0, 1e-15);
  EXPECT_NEAR(*critical_mass(Dim::Three, -1.0), 0.0031663, 1e-7);
  EXPECT_NEAR(*critical_mass(Dim::Three, -1.0), 1.0 / (32.0 * pi * pi), 1e-15);
  EXPECT_FALSE(critical_mass(Dim::Two, -1.0).has_value());
  EXPECT_FALSE(critical_mass(Dim::Two, 3.0).has_value());
}

TEST(EnergyThreshold, KnownValues) {
  EXPECT_EQ(energy_threshold(Dim::One, -1.0, 2.0), 0.0);
  EXPECT_NEAR(energy_threshold(Dim::Two, -1.0, 1.0), -0.0031663, 1e-7);
  EXPECT_EQ(energy_threshold(Dim::Three, -5.0, 3.0), 0.0);
}

TEST(Pseudoconformal, StandingWaveGivesExactBlowup) {
  for (int di : {1, 3}) {
    const Dim d = dim_from_int(di);
    const double beta = -1.0;
    const double omega = 0.8;
    const double theta0 = 0.3;
    const BoundState s = bound_state(d, beta, 1.0, omega);
    SolutionFn wave = [=](double t, double x) { return std::polar(bound_state_profile(s, x), omega * t + theta0); };
    const SolutionFn mapped = pseudoconformal_map(wave, d, 1.0);
    for (double t : {0.0, 0.4, 0.9, 0.99}) {
      for (double x : {0.1, 0.5, 2.0}) {
        const Complex a = mapped(t, x);
        const Complex b = exact_blowup_solution(d, beta, omega, theta0, 1.0, t, x);
        EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(b)) << "d=" << di << " t=" << t << " x=" << x;
      }
    }
  }
}

TEST(Pseudoconformal, OneDimensionalExactSolutionSolvesTheProblem) {
  // away from the origin: i psi_t = -psi_xx; at the origin the derivative jump is beta |q|^2 q
  const double beta = -1.0;
  const double omega = 1.0;
  const double t = 0.4;
  auto psi = [&](double tt, double x) { return exact_blowup_solution(Dim::One, beta, omega, 0.0, 1.0, tt, x); };
  const double h = 1e-4;
  for (double x : {0.3, 1.2}) {
    const Complex ut = (psi(t + h, x) - psi(t - h, x)) / (2.0 * h);
    const Complex uxx = (psi(t, x + h) - 2.0 * psi(t, x) + psi(t, x - h)) / (h * h);
    EXPECT_LT(std::abs(Complex(0.0, 1.0) * ut + uxx), 1e-5 * std::abs(uxx) + 1e-5);
  }
  const double e = 1e-7;
  const Complex jump = (psi(t, e) - psi(t, 0.0)) / e - (psi(t, 0.0) - psi(t, -e)) / e;
  const Complex q = psi(t, 0.0);
  EXPECT_LT(std::abs(jump - beta * std::norm(q) * q), 1e-5 * std::abs(q));
}

TEST(ExactCharge, Values) {
  const Complex q0 = exact_blowup_charge(Dim::One, -1.0, 1.0, 0.0, 1.0, 0.0);
  EXPECT_NEAR(std::abs(q0), 1.4142136, 1e-7);
  EXPECT_NEAR(std::arg(q0), 1.0, 1e-15);
  const Complex q1 = exact_blowup_charge(Dim::One, -1.0, 1.0, 0.0, 1.0, 0.75);
  EXPECT_NEAR(std::abs(q1) / std::abs(q0), 2.0, 1e-14);
  EXPECT_THROW(exact_blowup_charge(Dim::One, -1.0, 1.0, 0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(exact_blowup_charge(Dim::Two, -1.0, 1.0, 0.0, 1.0, 0.0), ConstraintError);
  // charge is the origin value of the solution in d = 1
  EXPECT_LT(std::abs(exact_blowup_solution(Dim::One, -1.0, 1.0, 0.0, 1.0, 0.5, 0.0) -
                     exact_blowup_charge(Dim::One, -1.0, 1.0, 0.0, 1.0, 0.5)),
            1e-14);
}

}  // namespace
