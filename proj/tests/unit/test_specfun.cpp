#include <gtest/gtest.h>

#include <cmath>

#include "deltanls/specfun.hpp"

namespace {

#include "specfun_oracle.inc"

using deltanls::Complex;
using deltanls::Dim;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

TEST(Gamma, MatchesReference) {
  for (const auto& r : kGammaRef) EXPECT_LT(rel(deltanls::gamma(r[0]), r[1]), 1e-12) << "s=" << r[0];
}

TEST(Gamma, SmallIntegersAndHalf) {
  EXPECT_DOUBLE_EQ(deltanls::gamma(1.0), 1.0);
  EXPECT_NEAR(deltanls::gamma(5.0), 24.0, 24.0 * 1e-14);
  EXPECT_NEAR(deltanls::gamma(0.5), 1.7724539, 1e-7);
}

TEST(Gamma, RejectsNonPositive) {
  EXPECT_THROW(deltanls::gamma(0.0), deltanls::DomainError);
  EXPECT_THROW(deltanls::gamma(-1.5), deltanls::DomainError);
}

TEST(BesselK, MatchesReference) {
  for (const auto& r : kBesselRef) {
    EXPECT_LT(rel(deltanls::bessel_k0(r[0]), r[1]), 1e-10) << "x=" << r[0];
    EXPECT_LT(rel(deltanls::bessel_k1(r[0]), r[2]), 1e-10) << "x=" << r[0];
  }
}

TEST(BesselK, KnownValues) {
  EXPECT_NEAR(deltanls::bessel_k0(1.0), 0.4210244, 1e-7);
  EXPECT_NEAR(deltanls::bessel_k0(5.0), 3.6911e-3, 1e-7);
  const double x = 1e-6;
  EXPECT_NEAR(deltanls::bessel_k0(x), -std::log(x / 2.0) - std::numbers::egamma, 1e-10);
}

TEST(BesselK, WronskianWithI) {
  for (double x = 0.1; x <= 20.0; x *= 1.25) {
    const double w = std::cyl_bessel_i(0.0, x) * deltanls::bessel_k1(x) + std::cyl_bessel_i(1.0, x) * deltanls::bessel_k0(x);
    EXPECT_LT(rel(w, 1.0 / x), 1e-9) << "x=" << x;
  }
}

TEST(BesselK, DomainAndUnderflow) {
  EXPECT_THROW(deltanls::bessel_k0(0.0), deltanls::DomainError);
  EXPECT_THROW(deltanls::bessel_k1(-1.0), deltanls::DomainError);
  EXPECT_EQ(deltanls::bessel_k0(800.0), 0.0);
}

TEST(VolterraKernel, MatchesReference) {
  for (const auto& r : kKernelRef) {
    EXPECT_LT(rel(deltanls::volterra_kernel(r[0]), r[1]), 1e-8) << "t=" << r[0];
    EXPECT_LT(rel(deltanls::volterra_kernel_integral(r[0]), r[2]), 1e-8) << "t=" << r[0];
    EXPECT_LT(rel(deltanls::volterra_kernel_first_moment(r[0]), r[3]), 1e-8) << "t=" << r[0];
  }
  EXPECT_NEAR(deltanls::volterra_kernel(1.0), 2.8077702, 1e-7);
}

TEST(VolterraKernel, OrderingFollowsReference) {
  // K2 has a minimum between 0.1 and 1; the reference fixes the sign of K2(2) - K2(1).
  const double k1 = deltanls::volterra_kernel(1.0);
  const double k2 = deltanls::volterra_kernel(2.0);
  EXPECT_EQ(k2 > k1, kKernelRef[4][1] > kKernelRef[3][1]);
  EXPECT_GT(deltanls::volterra_kernel(1e-3), deltanls::volterra_kernel(1e-2));
  EXPECT_GT(deltanls::volterra_kernel(1e-2), deltanls::volterra_kernel(1e-1));
}

TEST(VolterraKernel, TableAgreesWithDirectQuadrature) {
  for (double t = 1e-6; t < 2e3; t *= 3.7) {
    EXPECT_NEAR(deltanls::log_volterra_kernel(t), deltanls::log_volterra_kernel_direct(t), 1e-9) << "t=" << t;
  }
}

TEST(VolterraKernel, Domain) {
  EXPECT_THROW(deltanls::volterra_kernel(0.0), deltanls::DomainError);
  EXPECT_TRUE(std::isinf(deltanls::volterra_kernel(800.0)));
  EXPECT_NEAR(deltanls::log_volterra_kernel(800.0), 800.0, 1e-9);
}

TEST(ComplexFunctions, MatchReference) {
  for (const auto& r : kComplexRef) {
    const Complex z{r[0], r[1]};
    EXPECT_LT(rel(deltanls::faddeeva_w(z), Complex(r[2], r[3])), 1e-10) << z;
    EXPECT_LT(rel(deltanls::erfc_complex(z), Complex(r[4], r[5])), 1e-10) << z;
    EXPECT_LT(rel(deltanls::expint_e1(z), Complex(r[6], r[7])), 1e-10) << z;
  }
}

TEST(ComplexFunctions, ErfcIdentities) {
  EXPECT_EQ(deltanls::erfc_complex(0.0), Complex(1.0));
  EXPECT_NEAR(deltanls::erfc_complex(1.0).real(), 0.1572992, 1e-7);
  for (const Complex z : {Complex(0.3, 0.7), Complex(-2.0, 1.5), Complex(4.0, -3.0)}) {
    EXPECT_LT(std::abs(deltanls::erfc_complex(-z) - (2.0 - deltanls::erfc_complex(z))), 1e-12 * std::abs(deltanls::erfc_complex(-z)));
  }
}

TEST(FreePropagator, OriginValueAndModulus) {
  const Complex u = deltanls::free_propagator(Dim::One, 1.0, 0.0);
  EXPECT_NEAR(u.real(), 0.1994711, 1e-7);
  EXPECT_NEAR(u.imag(), -0.1994711, 1e-7);
  for (int d = 1; d <= 3; ++d) {
    for (double t : {-2.0, -0.3, 0.01, 1.0, 7.0}) {
      const double m = std::pow(4.0 * std::numbers::pi * std::abs(t), -d / 2.0);
      EXPECT_NEAR(std::abs(deltanls::free_propagator(deltanls::dim_from_int(d), t, 1.3)), m, 1e-14 * m);
    }
  }
}

TEST(FreePropagator, ThreeDimensionalPhase) {
  const Complex u = deltanls::free_propagator(Dim::Three, 1.0, 2.0);
  // exp(i |x|^2 / 4t) times (4 pi i)^{-3/2}, the latter with phase -3 pi / 4
  const Complex expect = std::polar(std::pow(4.0 * std::numbers::pi, -1.5), 1.0 - 0.75 * std::numbers::pi);
  EXPECT_LT(std::abs(u - expect), 1e-15);
  const double x[3] = {0.0, 1.2, -1.6};
  EXPECT_LT(std::abs(deltanls::free_propagator(Dim::Three, 1.0, x) - expect), 1e-15);
}

TEST(FreePropagator, NegativeTimeBranch) {
  // principal branch: (4 pi i t)^{1/2} for t < 0 has phase -pi/4
  const Complex u = deltanls::free_propagator(Dim::One, -1.0, 0.0);
  const Complex expect = 1.0 / std::sqrt(Complex(0.0, -4.0 * std::numbers::pi));
  EXPECT_LT(std::abs(u - expect), 1e-15);
  EXPECT_THROW(deltanls::free_propagator(Dim::One, 0.0, 1.0), deltanls::DomainError);
}

}  // namespace
