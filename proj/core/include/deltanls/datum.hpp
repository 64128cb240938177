#pragma once

// Initial data with exact (or FFT-accurate) free Schrodinger evolution. The free
// evolution at the origin is the input of the charge equation; the full free field is
// the first term of the Duhamel formula.

#include <memory>
#include <variant>
#include <vector>

#include "deltanls/analytic.hpp"
#include "deltanls/types.hpp"

namespace deltanls {

/// A exp(-|x|^2 / (2 a^2))
struct Gaussian {
  Complex amplitude{1.0, 0.0};
  double width = 1.0;
};

/// A (|x|/a)^2 exp(-|x|^2 / (2 a^2)); vanishes at the origin, so its charge starts at zero
/// in every dimension and its free evolution decays fast in space.
struct VanishingGaussian {
  Complex amplitude{1.0, 0.0};
  double width = 1.0;
};

/// q0 G_lambda + regular
struct GreenDatum {
  Complex q0{1.0, 0.0};
  double lambda = 1.0;
  Gaussian regular{Complex(0.0), 1.0};
};

/// e^{i phase} u with u the bound state (d, beta, sigma, omega).
struct BoundStateDatum {
  double beta = -1.0;
  double sigma = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

/// Initial datum of the explicit blow-up solution (sigma = 1, d = 1, 3) blowing up at T.
struct BlowupDatum {
  double beta = -1.0;
  double omega = 1.0;
  double theta = 0.0;
  double T = 1.0;
};

/// Samples on x_k = x0 + k dx (d = 1 only). The free evolution is spectral on the
/// zero-padded periodic box, so the data must be negligible near both ends.
class Grid1D {
 public:
  Grid1D(double x0, double dx, std::vector<Complex> values, int padding = 4);

  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return dx_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  Complex value(double x) const;
  Complex free_evolution(double t, double x) const;
  Complex free_gradient(double t, double x) const;

 private:
  double x0_;
  double dx_;
  std::vector<Complex> values_;
  // padded spectrum: wave numbers and coefficients
  std::shared_ptr<const std::vector<double>> k_;
  std::shared_ptr<const std::vector<Complex>> hat_;
  double box_origin_ = 0.0;
};

using InitialDatum = std::variant<Gaussian, VanishingGaussian, GreenDatum, BoundStateDatum, BlowupDatum, Grid1D>;

/// Validates the datum for dimension d (Grid1D only in d = 1, blow-up data only in d = 1, 3,
/// admissible bound-state parameters). Throws ConstraintError.
void validate_datum(const InitialDatum& datum, Dim d);

/// True when the datum has a G_lambda singular part (charge nonzero at t = 0 in d = 2, 3).
bool has_singular_part(const InitialDatum& datum, Dim d);

/// (U_d(t) psi0)(0) for t >= 0; singular at t = 0 for data with a singular part in d = 2, 3.
Complex free_evolution_at_origin(const InitialDatum& datum, Dim d, double t);

/// (U_d(t) psi0)(x) with x the signed coordinate (d = 1) or |x| (d = 2, 3).
Complex free_evolution(const InitialDatum& datum, Dim d, double t, double x);

/// x-derivative (d = 1) or radial derivative (d = 2, 3) of the free evolution. The Green and
/// bound-state variants in d = 2 are not supported.
Complex free_evolution_gradient(const InitialDatum& datum, Dim d, double t, double x);

Complex datum_value(const InitialDatum& datum, Dim d, double x);
double datum_mass(const InitialDatum& datum, Dim d);

/// (U_d(t) G_lambda)(x) and its x- or radial derivative, exact for d = 1, 3 and by the
/// heat-kernel integral in d = 2 (closed form at the origin).
Complex green_free_evolution(Dim d, double lambda, double t, double x);
Complex green_free_gradient(Dim d, double lambda, double t, double x);

/// The even-extension building block for the 1-d Green data: U(t)[e^{-a y} H(y)](x).
Complex half_line_exponential_evolution(double a, double t, double x);

}  // namespace deltanls
