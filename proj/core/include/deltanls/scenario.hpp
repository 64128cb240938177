#pragma once

// Scenario files: a strict JSON document describing one run (model, datum, time grid,
// outputs, mode) and the orchestration that turns it into CSV / JSON artifacts.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "deltanls/approx1d.hpp"
#include "deltanls/charge.hpp"
#include "deltanls/datum.hpp"

namespace deltanls {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownKey, TypeMismatch, Constraint, Missing };

  ConfigError(Kind kind, std::string path, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  /// Dotted key path, e.g. "model.sigma" or "approx.eps[2]"; empty for syntax errors.
  const std::string& path() const noexcept { return path_; }

 private:
  Kind kind_;
  std::string path_;
};

enum class Mode { Evolve, Spectrum, StandingWave, Blowup, Approx, Verify };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& s);  // throws ConstraintError

struct GridSpec {
  std::string kind = "gauss";  // gauss | uniform
  double extent = 30.0;
  int panels = 64;
  int order = 12;
  std::size_t points = 2001;  // uniform only
};

struct OutputSpec {
  std::vector<double> snapshots;  // times on the h grid
  bool charge = true;
  bool observables = true;  // mass, energy, moment of inertia at the snapshot times
  GridSpec grid;
};

struct SpectrumSpec {
  double alpha_min = -1.0;
  double alpha_max = 1.0;
  std::size_t count = 21;
};

struct StandingWaveSpec {
  double omega_min = 0.5;
  double omega_max = 2.0;
  std::size_t count = 16;
  std::size_t profile_points = 201;
  double profile_extent = 10.0;
};

struct RestartOptions {
  /// Largest accepted |arg(q_{n+1} / q_n)|; the chirp of a collapsing solution must stay resolved.
  double max_phase_step = 0.025;
  int max_restarts = 8;
  double h_min = 1e-6;
};

struct BlowupSpec {
  std::pair<double, double> window{0.5, 0.95};
  RestartOptions restart;
};

struct ApproxSpec {
  std::string profile = "gaussian";  // gaussian | box
  double box_half_width = 1.0;
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  double half_width = 20.0;
  std::size_t n = 8192;
  double dt = 1e-4;
  std::size_t frames = 10;
  /// Wall-clock column; off by default so the table is reproducible byte for byte.
  bool timing = false;
};

struct VerifySpec {
  std::vector<int> criteria;  // empty: all
};

struct Scenario {
  std::string name;
  Mode mode = Mode::Evolve;
  DeltaModel model = DeltaModel::nonlinear(Dim::One, 1.0, 1.0);
  InitialDatum datum = Gaussian{};
  double T = 1.0;
  double h = 1e-3;
  double blowup_guard = 1e6;
  OutputSpec outputs;
  SpectrumSpec spectrum;
  StandingWaveSpec standing_wave;
  BlowupSpec blowup;
  ApproxSpec approx;
  VerifySpec verify;
  /// Fully resolved configuration (defaults filled in); copied into every artifact header.
  nlohmann::json resolved;
};

/// Strict parse: unknown keys, wrong types and violated constraints throw ConfigError naming the key.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

struct RestartResult {
  ChargeTrajectory traj;
  int restarts = 0;
  double max_phase_step = 0.0;
};

/// Solves on [0, T] and halves h until the charge phase is resolved everywhere (or h_min /
/// max_restarts is reached, which throws NumericalError). The grid is uniform on every
/// attempt; product-integration weights are global, so each attempt starts from scratch.
RestartResult solve_with_restarts(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                                  const RestartOptions& options = {}, const NonlinearOptions& nonlinear = {});

struct RunContext {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
  bool strict = false;
};

/// Exit codes for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerification = 4;

/// Runs the scenario, writes its artifacts into ctx.out_dir and a one-line summary per
/// result to `log`. Numerical failures propagate as exceptions.
int run_scenario(const Scenario& scenario, const RunContext& ctx, std::ostream& log);

}  // namespace deltanls
