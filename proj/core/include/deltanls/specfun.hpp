#pragma once

#include <span>

#include "deltanls/types.hpp"

namespace deltanls {

/// Euler Gamma for s > 0.
double gamma(double s);

/// Modified Bessel functions of the second kind, x > 0. Both underflow to 0 beyond x ~ 745.
double bessel_k0(double x);
double bessel_k1(double x);

/// K2(t) = int_0^inf t^{s-1} / Gamma(s) ds, the d = 2 memory kernel. Tabulated on
/// [1e-8, 1e3]; direct quadrature outside. Overflows to +inf past t ~ 709.
double volterra_kernel(double t);
/// log K2(t), finite for every t > 0.
double log_volterra_kernel(double t);
/// Direct quadrature of the defining integral (no table), for checks and table construction.
double log_volterra_kernel_direct(double t);

/// int_0^h K2(u) du and (1/h) int_0^h u K2(u) du, the first-cell moments used by product integration.
double volterra_kernel_integral(double h);
double volterra_kernel_first_moment(double h);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
Complex faddeeva_w(Complex z);

/// Complementary error function on the whole complex plane.
Complex erfc_complex(Complex z);

/// Exponential integral E1(z), principal branch (cut along the negative real axis).
Complex expint_e1(Complex z);

/// U_d(t, x) = exp(i|x|^2/(4t)) / (4 pi i t)^{d/2} with the principal branch, so for
/// t < 0 the phase constant is exp(+i pi d/4). Only |x| enters.
Complex free_propagator(Dim d, double t, double r);
Complex free_propagator(Dim d, double t, std::span<const double> x);

}  // namespace deltanls
