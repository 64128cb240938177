#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "deltanls/analytic.hpp"
#include "deltanls/csv.hpp"
#include "deltanls/field.hpp"
#include "deltanls/scenario.hpp"
#include "deltanls/verify.hpp"

namespace deltanls {

using nlohmann::json;

namespace {

double max_phase_step(const ChargeTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t n = 1; n < traj.q.size(); ++n) {
    if (traj.q[n - 1] == 0.0 || traj.q[n] == 0.0) continue;
    worst = std::max(worst, std::abs(std::arg(traj.q[n] / traj.q[n - 1])));
  }
  return worst;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

SpatialGrid make_grid(Dim d, const GridSpec& g) {
  return g.kind == "gauss" ? gauss_grid(d, g.extent, g.panels, g.order) : uniform_grid(d, g.extent, g.points);
}

std::filesystem::path artifact(const Scenario& s, const RunContext& ctx, const std::string& suffix) {
  return ctx.out_dir / (s.name + "_" + suffix);
}

CsvTable with_meta(CsvTable t, const Scenario& s, std::vector<std::pair<std::string, std::string>> extra = {}) {
  t.meta = flatten_metadata(s.resolved);
  for (auto& e : extra) t.meta.push_back(std::move(e));
  return t;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

int run_evolve(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  NonlinearOptions opt;
  opt.blowup_guard = s.blowup_guard;
  const ChargeTrajectory traj = solve(s.model, s.datum, s.T, s.h, opt);
  if (s.outputs.charge) write_csv(artifact(s, ctx, "charge.csv"), with_meta(charge_table(traj), s));
  log << "evolve " << s.name << ": " << traj.q.size() - 1 << " steps, |q(T)| = "
      << format_number(std::abs(traj.q.back())) << (traj.blown_up ? " (blow-up guard reached)" : "") << '\n';

  // Defocusing (and linear) runs are global; reaching the guard there is a numerical failure.
  if (traj.blown_up) {
    if (s.model.is_linear() || s.model.nonlinear_coupling().beta > 0.0) {
      throw NumericalError("evolve: charge exceeded the blow-up guard in a run that must stay global (t = " +
                           format_number(traj.time(traj.truncation_index)) + ")");
    }
    log << "evolve " << s.name << ": trajectory truncated at t = " << format_number(traj.last_time()) << '\n';
  }

  const SpatialGrid grid = make_grid(s.model.dim(), s.outputs.grid);
  CsvTable obs;
  obs.columns = {"t", "mass", "energy", "moment_of_inertia", "abs_q"};
  for (std::size_t i = 0; i < s.outputs.snapshots.size(); ++i) {
    const double t = s.outputs.snapshots[i];
    const auto n = static_cast<std::size_t>(std::llround(t / s.h));
    if (n >= traj.q.size()) {
      log << "evolve " << s.name << ": snapshot t = " << format_number(t) << " lies past the blow-up, skipped\n";
      continue;
    }
    const FieldSnapshot snap = reconstruct(traj, s.datum, n, grid, {true, ctx.threads, 1.0});
    write_csv(artifact(s, ctx, "snapshot_" + std::to_string(i) + ".csv"),
              with_meta(snapshot_table(snap), s, {{"snapshot.t", format_number(snap.t)}}));
    if (s.outputs.observables) {
      obs.rows.push_back({snap.t, mass(snap), energy(traj, snap), moment_of_inertia(snap), std::abs(snap.charge)});
    }
  }
  if (s.outputs.observables && !obs.rows.empty()) write_csv(artifact(s, ctx, "observables.csv"), with_meta(obs, s));
  return kExitOk;
}

int run_spectrum(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  CsvTable t;
  t.columns = {"alpha", "eigenvalue"};
  std::size_t found = 0;
  for (double a : linspace(s.spectrum.alpha_min, s.spectrum.alpha_max, s.spectrum.count)) {
    const auto e = eigenvalue(s.model.dim(), a);
    t.rows.push_back({a, e ? *e : std::nan("")});
    found += e.has_value();
  }
  write_csv(artifact(s, ctx, "spectrum.csv"), with_meta(t, s));
  log << "spectrum " << s.name << ": " << found << " of " << t.rows.size() << " couplings carry an eigenvalue\n";
  return kExitOk;
}

int run_standing_wave(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  const auto& c = s.model.nonlinear_coupling();
  const Dim d = s.model.dim();
  const auto& w = s.standing_wave;
  json curves;
  curves["config"] = s.resolved;
  const auto cm = critical_mass(d, c.beta);
  curves["critical_mass"] = cm ? json(*cm) : json(nullptr);
  json omega = json::array(), m = json::array(), e = json::array(), q = json::array();

  const auto omegas = linspace(w.omega_min, w.omega_max, w.count);
  CsvTable profiles;
  profiles.columns = {d == Dim::One ? "x" : "r"};
  std::vector<BoundState> states;
  for (double om : omegas) {
    const BoundState b = bound_state(d, c.beta, c.sigma, om);
    states.push_back(b);
    omega.push_back(om);
    m.push_back(bound_mass(b));
    e.push_back(bound_energy(b));
    q.push_back(bound_state_charge(b));
    profiles.columns.push_back("u_" + std::to_string(states.size() - 1));
  }
  curves["omega"] = omega;
  curves["mass"] = m;
  curves["energy"] = e;
  curves["charge"] = q;
  write_json(artifact(s, ctx, "curves.json"), curves);

  // d = 2, 3 profiles are singular at r = 0; start one step out.
  const double lo = d == Dim::One ? -w.profile_extent : w.profile_extent / static_cast<double>(w.profile_points);
  for (double x : linspace(lo, w.profile_extent, w.profile_points)) {
    std::vector<double> row{x};
    for (const auto& b : states) row.push_back(bound_state_profile(b, x));
    profiles.rows.push_back(std::move(row));
  }
  write_csv(artifact(s, ctx, "profiles.csv"), with_meta(profiles, s));
  log << "standing-wave " << s.name << ": " << states.size() << " frequencies";
  if (cm) log << ", critical mass " << format_number(*cm);
  log << '\n';
  return kExitOk;
}

int run_blowup(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  NonlinearOptions opt;
  opt.blowup_guard = s.blowup_guard;
  const RestartResult rr = solve_with_restarts(s.model, s.datum, s.T, s.h, s.blowup.restart, opt);
  const ChargeTrajectory& traj = rr.traj;
  write_csv(artifact(s, ctx, "charge.csv"),
            with_meta(charge_table(traj), s, {{"solver.h_final", format_number(traj.h)}}));
  const RateFit fit = blowup_rate_fit(traj, s.blowup.window);

  json report;
  report["config"] = s.resolved;
  report["h_final"] = traj.h;
  report["restarts"] = rr.restarts;
  report["max_phase_step"] = rr.max_phase_step;
  report["blown_up"] = traj.blown_up;
  report["fit"] = {{"T_est", fit.T_est}, {"exponent", fit.exponent}, {"rms_residual", fit.rms_residual},
                   {"samples", fit.samples}};
  // The rate theorem bounds ||psi'|| from below by (T - t)^{-(1 - sigma_c)/2}; it says nothing
  // direct about |q|, so it is reported next to the fit, not compared with it.
  const double sig = s.model.nonlinear_coupling().sigma;
  report["sigma_c"] = sigma_c(sig);
  report["gradient_rate_exponent"] = blowup_rate_exponent(sig);
  if (const auto* b = std::get_if<BlowupDatum>(&s.datum)) {
    double worst = 0.0;
    for (std::size_t n = 0; n < traj.q.size(); ++n) {
      const double t = traj.time(n);
      if (t < s.blowup.window.first - 1e-12 || t > s.blowup.window.second + 1e-12) continue;
      const Complex ex = exact_blowup_charge(s.model.dim(), b->beta, b->omega, b->theta, b->T, t);
      worst = std::max(worst, std::abs(std::abs(traj.q[n]) - std::abs(ex)) / std::abs(ex));
    }
    report["exact_T"] = b->T;
    report["max_modulus_relative_error"] = worst;
  }
  write_json(artifact(s, ctx, "rate_fit.json"), report);
  log << "blowup " << s.name << ": exponent " << format_number(fit.exponent) << ", T_est "
      << format_number(fit.T_est) << " (h = " << format_number(traj.h) << ", " << rr.restarts << " restarts)\n";
  return kExitOk;
}

int run_approx(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  const double beta = s.model.is_linear() ? s.model.linear_coupling().alpha : s.model.nonlinear_coupling().beta;
  const double sigma = s.model.is_linear() ? 0.0 : s.model.nonlinear_coupling().sigma;
  const auto& a = s.approx;
  const PotentialProfile V =
      a.profile == "box" ? PotentialProfile::box(beta, a.box_half_width) : PotentialProfile::gaussian(beta);
  CompareOptions opt;
  opt.grid = {a.half_width, a.n};
  opt.dt = a.dt;
  opt.charge_h = s.h;
  opt.frames = a.frames;
  opt.threads = ctx.threads;
  const auto rows = compare_to_delta(V, a.eps, sigma, s.datum, s.T, opt);

  CsvTable t;
  t.columns = {"eps", "h1_error"};
  if (a.timing) t.columns.push_back("runtime_s");
  for (const auto& r : rows) {
    t.rows.push_back({r.eps, r.h1_error});
    if (a.timing) t.rows.back().push_back(r.runtime_s);
    log << "approx " << s.name << ": eps " << format_number(r.eps) << "  error " << format_number(r.h1_error);
    if (&r != &rows.front()) {
      const auto& p = *(&r - 1);
      log << "  rate " << std::setprecision(3) << std::log(p.h1_error / r.h1_error) / std::log(p.eps / r.eps);
    }
    log << '\n';
  }
  write_csv(artifact(s, ctx, "approx.csv"), with_meta(t, s));
  return kExitOk;
}

int run_verify(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  const auto results = verify::run_acceptance(s.verify.criteria,
                                              ctx.strict ? verify::Profile::Strict : verify::Profile::Default,
                                              ctx.threads, log);
  for (const auto& r : results) {
    if (!r.passed) return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

RestartResult solve_with_restarts(const DeltaModel& model, const InitialDatum& datum, double T, double h,
                                  const RestartOptions& options, const NonlinearOptions& nonlinear) {
  RestartResult r;
  for (;;) {
    r.traj = solve(model, datum, T, h, nonlinear);
    r.max_phase_step = max_phase_step(r.traj);
    // A guard hit before T is only trusted once the phase is resolved up to it.
    if (r.max_phase_step <= options.max_phase_step) return r;
    if (r.restarts >= options.max_restarts || h / 2.0 < options.h_min) {
      throw NumericalError("solve_with_restarts: charge phase still under-resolved at h = " + format_number(h) +
                           " (max phase step " + format_number(r.max_phase_step) + ")");
    }
    h /= 2.0;
    ++r.restarts;
  }
}

int run_scenario(const Scenario& s, const RunContext& ctx, std::ostream& log) {
  std::filesystem::create_directories(ctx.out_dir);
  switch (s.mode) {
    case Mode::Evolve: return run_evolve(s, ctx, log);
    case Mode::Spectrum: return run_spectrum(s, ctx, log);
    case Mode::StandingWave: return run_standing_wave(s, ctx, log);
    case Mode::Blowup: return run_blowup(s, ctx, log);
    case Mode::Approx: return run_approx(s, ctx, log);
    case Mode::Verify: return run_verify(s, ctx, log);
  }
  return kExitConfig;
}

}  // namespace deltanls
