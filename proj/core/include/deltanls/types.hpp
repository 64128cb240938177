#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "deltanls/error.hpp"

namespace deltanls {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr Complex kI{0.0, 1.0};

/// Space dimension. Point interactions are only defined for d = 1, 2, 3.
enum class Dim : int { One = 1, Two = 2, Three = 3 };

inline constexpr int to_int(Dim d) noexcept { return static_cast<int>(d); }

inline Dim dim_from_int(int d) {
  if (d < 1 || d > 3) {
    throw ConstraintError("dimension must be 1, 2 or 3 (point interactions are only defined there), got " +
                          std::to_string(d));
  }
  return static_cast<Dim>(d);
}

/// e^{i pi/4}
inline Complex eighth_turn() noexcept { return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}; }

inline bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace deltanls
