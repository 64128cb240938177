#include "deltanls/approx1d.hpp"

#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <mutex>
#include <string>

#include "deltanls/field.hpp"
#include "fftw_lock.hpp"

namespace deltanls {

namespace {

// Forward/backward plans on one buffer; planner calls are serialized.
class FftPair {
 public:
  explicit FftPair(std::size_t n) : buf_(n) {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  std::vector<Complex>& buffer() { return buf_; }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  std::vector<Complex> buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

std::vector<double> wave_numbers(const PeriodicGrid& grid) {
  std::vector<double> k(grid.n);
  const double box = 2.0 * grid.half_width;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double jj = j < grid.n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(grid.n);
    k[j] = 2.0 * kPi * jj / box;
  }
  if (grid.n % 2 == 0) k[grid.n / 2] = 0.0;  // Nyquist mode is not differentiable
  return k;
}

void check_grid(const PeriodicGrid& grid) {
  if (!(grid.half_width > 0.0) || grid.n < 16) throw ConstraintError("periodic grid: need L > 0 and n >= 16");
}

}  // namespace

PotentialProfile PotentialProfile::box(double beta, double a) {
  if (!(a > 0.0)) throw ConstraintError("box potential: half-width must be positive");
  return PotentialProfile(Kind::Box, beta, a);
}

PotentialProfile PotentialProfile::gaussian(double beta) { return PotentialProfile(Kind::Gaussian, beta, 1.0); }

double PotentialProfile::operator()(double x) const {
  if (kind_ == Kind::Box) return std::abs(x) <= a_ ? beta_ / (2.0 * a_) : 0.0;
  return beta_ * std::exp(-x * x) / std::sqrt(kPi);
}

double PotentialProfile::moment() const {
  if (kind_ == Kind::Box) return std::abs(beta_) * a_ / 2.0;
  return std::abs(beta_) / std::sqrt(kPi);
}

double PotentialProfile::support_radius() const { return kind_ == Kind::Box ? a_ : 6.1; }

std::vector<Complex> spectral_derivative(const std::vector<Complex>& values, const PeriodicGrid& grid) {
  check_grid(grid);
  if (values.size() != grid.n) throw ConstraintError("spectral_derivative: size mismatch");
  FftPair fft(grid.n);
  auto& b = fft.buffer();
  b = values;
  fft.forward();
  const auto k = wave_numbers(grid);
  const double norm = 1.0 / static_cast<double>(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) b[j] *= kI * k[j] * norm;
  fft.backward();
  return b;
}

double periodic_mass(const std::vector<Complex>& values, const PeriodicGrid& grid) {
  double m = 0.0;
  for (const auto& v : values) m += std::norm(v);
  return m * grid.dx();
}

double regularized_energy(const std::vector<Complex>& values, const PeriodicGrid& grid, const PotentialProfile& V,
                          double eps, double sigma) {
  const auto dv = spectral_derivative(values, grid);
  double kinetic = 0.0;
  double potential = 0.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    kinetic += std::norm(dv[k]);
    potential += V.scaled(grid.x(k), eps) * std::pow(std::norm(values[k]), sigma + 1.0);
  }
  return grid.dx() * (0.5 * kinetic + potential / (2.0 * sigma + 2.0));
}

std::vector<SplitStepFrame> splitstep_solve(const PotentialProfile& V, double eps, double sigma,
                                            const InitialDatum& psi0, double T, const PeriodicGrid& grid,
                                            const SplitStepOptions& options) {
  check_grid(grid);
  if (!(eps > 0.0)) throw ConstraintError("splitstep: eps must be positive");
  if (sigma < 0.0) throw ConstraintError("splitstep: sigma must be nonnegative");
  if (!(T > 0.0) || !(options.dt > 0.0) || options.frames == 0) throw ConstraintError("splitstep: bad time grid");
  validate_datum(psi0, Dim::One);
  if (!options.free_only && 2.0 * V.support_radius() * eps < 8.0 * grid.dx()) {
    throw ConstraintError("splitstep: potential core of width " + std::to_string(2.0 * V.support_radius() * eps) +
                          " is under-resolved by dx = " + std::to_string(grid.dx()));
  }
  const std::size_t steps = step_count(T, options.dt);
  if (steps % options.frames != 0) throw ConstraintError("splitstep: T / dt must be a multiple of the frame count");
  const std::size_t stride = steps / options.frames;

  const std::size_t n = grid.n;
  std::vector<double> w(n, 0.0);
  if (!options.free_only)
    for (std::size_t k = 0; k < n; ++k) w[k] = V.scaled(grid.x(k), eps);
  const auto kw = wave_numbers(grid);
  std::vector<Complex> kinetic(n);
  const double norm = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) kinetic[j] = std::polar(norm, -kw[j] * kw[j] * options.dt);

  FftPair fft(n);
  auto& psi = fft.buffer();
  for (std::size_t k = 0; k < n; ++k) psi[k] = datum_value(psi0, Dim::One, grid.x(k));

  auto potential_half_step = [&] {
    if (options.free_only) return;
    for (std::size_t k = 0; k < n; ++k) {
      if (w[k] == 0.0) continue;
      const double phase = -0.5 * options.dt * w[k] * std::pow(std::norm(psi[k]), sigma);
      psi[k] *= std::polar(1.0, phase);
    }
  };

  std::vector<SplitStepFrame> frames;
  frames.push_back({0.0, psi});
  for (std::size_t s = 1; s <= steps; ++s) {
    potential_half_step();
    fft.forward();
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic[j];
    fft.backward();
    potential_half_step();
    if (s % stride == 0) frames.push_back({static_cast<double>(s) * options.dt, psi});
  }
  return frames;
}

std::vector<ApproxRow> compare_to_delta(const PotentialProfile& V, const std::vector<double>& eps_list, double sigma,
                                        const InitialDatum& psi0, double T, const CompareOptions& options) {
  const PeriodicGrid& pg = options.grid;
  check_grid(pg);
  const DeltaModel model =
      sigma == 0.0 ? DeltaModel::linear(Dim::One, V.beta()) : DeltaModel::nonlinear(Dim::One, V.beta(), sigma);
  const ChargeTrajectory traj = solve(model, psi0, T, options.charge_h);
  if (traj.blown_up) throw NumericalError("compare_to_delta: the point-interaction solution blew up before T");

  SpatialGrid sg;
  sg.d = Dim::One;
  for (std::size_t k = 0; k < pg.n; ++k) {
    sg.points.push_back(pg.x(k));
    sg.weights.push_back(pg.dx());
  }
  const std::size_t charge_stride = step_count(T, options.charge_h) / options.frames;
  if (charge_stride * options.frames != step_count(T, options.charge_h)) {
    throw ConstraintError("compare_to_delta: T / charge_h must be a multiple of the frame count");
  }
  std::vector<FieldSnapshot> reference;
  for (std::size_t f = 0; f <= options.frames; ++f) {
    reference.push_back(reconstruct(traj, psi0, f * charge_stride, sg, {true, options.threads, 1.0}));
  }

  std::vector<ApproxRow> rows;
  for (double eps : eps_list) {
    const auto start = std::chrono::steady_clock::now();
    const auto frames = splitstep_solve(V, eps, sigma, psi0, T, pg, {options.dt, options.frames, false});
    double worst = 0.0;
    for (std::size_t f = 0; f < frames.size(); ++f) {
      const auto d = spectral_derivative(frames[f].values, pg);
      double e = 0.0;
      for (std::size_t k = 0; k < pg.n; ++k) {
        e += std::norm(frames[f].values[k] - reference[f].values[k]) + std::norm(d[k] - reference[f].gradients[k]);
      }
      worst = std::max(worst, std::sqrt(e * pg.dx()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({eps, worst, secs});
  }
  return rows;
}

}  // namespace deltanls
