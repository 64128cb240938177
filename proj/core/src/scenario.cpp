#include "deltanls/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "deltanls/analytic.hpp"

namespace deltanls {

using nlohmann::json;

ConfigError::ConfigError(Kind kind, std::string path, const std::string& what)
    : std::runtime_error(path.empty() ? what : path + ": " + what), kind_(kind), path_(std::move(path)) {}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Evolve: return "evolve";
    case Mode::Spectrum: return "spectrum";
    case Mode::StandingWave: return "standing-wave";
    case Mode::Blowup: return "blowup";
    case Mode::Approx: return "approx";
    case Mode::Verify: return "verify";
  }
  return "?";
}

Mode mode_from_name(const std::string& s) {
  for (Mode m : {Mode::Evolve, Mode::Spectrum, Mode::StandingWave, Mode::Blowup, Mode::Approx, Mode::Verify}) {
    if (s == mode_name(m)) return m;
  }
  throw ConstraintError("unknown mode '" + s + "' (evolve, spectrum, standing-wave, blowup, approx, verify)");
}

namespace {

// One JSON object being consumed. Every read is echoed into `out` so the resolved
// configuration includes defaults; finish() rejects keys nobody asked for.
class Node {
 public:
  Node(const json& j, json& out, std::string path) : j_(j), out_(out), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(ConfigError::Kind::TypeMismatch, path_, "expected an object");
    out_ = json::object();
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }
  void record(const std::string& key, json v) { out_[key] = std::move(v); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(key);
    double x;
    if (!v) {
      if (!fallback) missing(key);
      x = *fallback;
    } else {
      if (!v->is_number()) mismatch(key, "a number");
      x = v->get<double>();
      if (!std::isfinite(x)) constraint(key, "must be finite");
    }
    out_[key] = x;
    return x;
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
    const json* v = find(key);
    std::int64_t x;
    if (!v) {
      if (!fallback) missing(key);
      x = *fallback;
    } else {
      if (!v->is_number_integer()) mismatch(key, "an integer");
      x = v->get<std::int64_t>();
    }
    out_[key] = x;
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) {
    const auto x = integer(key, static_cast<std::int64_t>(fallback));
    if (x < static_cast<std::int64_t>(min)) constraint(key, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(x);
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) constraint(key, "must be positive");
    return x;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(key);
    std::string s;
    if (!v) {
      if (!fallback) missing(key);
      s = *fallback;
    } else {
      if (!v->is_string()) mismatch(key, "a string");
      s = v->get<std::string>();
    }
    out_[key] = s;
    return s;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    bool b = fallback;
    if (v) {
      if (!v->is_boolean()) mismatch(key, "a boolean");
      b = v->get<bool>();
    }
    out_[key] = b;
    return b;
  }

  /// A number or a [re, im] pair.
  Complex complex(const std::string& key, Complex fallback) {
    const json* v = find(key);
    Complex z = fallback;
    if (v) z = to_complex(*v, key_path(key));
    out_[key] = json::array({z.real(), z.imag()});
    return z;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const json* v = find(key);
    if (v) {
      if (!v->is_array()) mismatch(key, "an array of numbers");
      fallback.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) {
          throw ConfigError(ConfigError::Kind::TypeMismatch, key_path(key) + "[" + std::to_string(i) + "]",
                            "expected a number");
        }
        fallback.push_back((*v)[i].get<double>());
      }
    }
    out_[key] = fallback;
    return fallback;
  }

  /// Child object; absent children parse as {} so their defaults are recorded.
  Node child(const std::string& key, bool required = false) {
    const json* v = find(key);
    if (!v && required) missing(key);
    static const json empty = json::object();
    return Node(v ? *v : empty, out_[key], key_path(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(ConfigError::Kind::UnknownKey, key_path(it.key()), "unknown key");
      }
    }
  }

  [[noreturn]] void missing(const std::string& key) const {
    throw ConfigError(ConfigError::Kind::Missing, key_path(key), "required key is missing");
  }
  [[noreturn]] void mismatch(const std::string& key, const std::string& expected) const {
    throw ConfigError(ConfigError::Kind::TypeMismatch, key_path(key), "expected " + expected);
  }
  [[noreturn]] void constraint(const std::string& key, const std::string& what) const {
    throw ConfigError(ConfigError::Kind::Constraint, key_path(key), what);
  }

  static Complex to_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(ConfigError::Kind::TypeMismatch, path, "expected a number or [re, im]");
  }

 private:
  const json& j_;
  json& out_;
  std::string path_;
  std::set<std::string> seen_;
};

// Library constraint checks raise ConstraintError / DomainError; re-raise them against a key.
template <class F>
auto at_key(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConstraintError& e) {
    throw ConfigError(ConfigError::Kind::Constraint, path, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(ConfigError::Kind::Constraint, path, e.what());
  }
}

DeltaModel parse_model(Node n) {
  const auto d_raw = n.integer("d");
  const Dim d = at_key(n.key_path("d"), [&] { return dim_from_int(static_cast<int>(d_raw)); });
  const std::string coupling = n.string("coupling", "nonlinear");
  DeltaModel m = DeltaModel::linear(d, 0.0);
  if (coupling == "linear") {
    const double alpha = n.number("alpha");
    m = at_key(n.key_path("alpha"), [&] { return DeltaModel::linear(d, alpha); });
  } else if (coupling == "nonlinear") {
    const double beta = n.number("beta");
    const double sigma = n.number("sigma");
    if (!(sigma > 0.0)) n.constraint("sigma", "must be positive");
    m = at_key(n.key_path("beta"), [&] { return DeltaModel::nonlinear(d, beta, sigma); });
  } else {
    n.constraint("coupling", "must be 'linear' or 'nonlinear'");
  }
  n.finish();
  return m;
}

Gaussian parse_gaussian(Node& n, Complex amp) {
  Gaussian g;
  g.amplitude = n.complex("amplitude", amp);
  g.width = n.positive("width", 1.0);
  return g;
}

InitialDatum parse_datum(Node n, const DeltaModel& model) {
  const std::string kind = n.string("kind");
  const double beta0 = model.is_linear() ? -1.0 : model.nonlinear_coupling().beta;
  const double sigma0 = model.is_linear() ? 1.0 : model.nonlinear_coupling().sigma;
  InitialDatum datum;
  if (kind == "gaussian") {
    datum = parse_gaussian(n, 1.0);
  } else if (kind == "vanishing_gaussian") {
    VanishingGaussian g;
    g.amplitude = n.complex("amplitude", 1.0);
    g.width = n.positive("width", 1.0);
    datum = g;
  } else if (kind == "green") {
    GreenDatum g;
    g.q0 = n.complex("q0", 1.0);
    g.lambda = n.positive("lambda", 1.0);
    Node r = n.child("regular");
    g.regular = parse_gaussian(r, 0.0);
    r.finish();
    datum = g;
  } else if (kind == "bound_state") {
    BoundStateDatum b;
    b.beta = n.number("beta", beta0);
    b.sigma = n.number("sigma", sigma0);
    b.omega = n.number("omega", 1.0);
    b.phase = n.number("phase", 0.0);
    datum = b;
  } else if (kind == "blowup") {
    BlowupDatum b;
    b.beta = n.number("beta", beta0);
    b.omega = n.number("omega", 1.0);
    b.theta = n.number("theta", 0.0);
    b.T = n.positive("T", 1.0);
    datum = b;
  } else if (kind == "grid") {
    const double x0 = n.number("x0");
    const double dx = n.positive("dx");
    const json* v = n.find("values");
    if (!v) n.missing("values");
    if (!v->is_array() || v->size() < 2) n.mismatch("values", "an array of at least two samples");
    std::vector<Complex> values;
    json echo = json::array();
    for (std::size_t i = 0; i < v->size(); ++i) {
      values.push_back(Node::to_complex((*v)[i], n.key_path("values") + "[" + std::to_string(i) + "]"));
      echo.push_back(json::array({values.back().real(), values.back().imag()}));
    }
    n.record("values", std::move(echo));
    const auto padding = n.integer("padding", 4);
    if (padding < 1) n.constraint("padding", "must be at least 1");
    datum = Grid1D(x0, dx, std::move(values), static_cast<int>(padding));
  } else {
    n.constraint("kind", "must be one of gaussian, vanishing_gaussian, green, bound_state, blowup, grid");
  }
  n.finish();
  at_key(n.key_path("kind"), [&] {
    validate_datum(datum, model.dim());
    return 0;
  });
  return datum;
}

GridSpec parse_grid(Node n) {
  GridSpec g;
  g.kind = n.string("kind", g.kind);
  if (g.kind != "gauss" && g.kind != "uniform") n.constraint("kind", "must be 'gauss' or 'uniform'");
  g.extent = n.positive("extent", g.extent);
  if (g.kind == "gauss") {
    g.panels = static_cast<int>(n.count("panels", static_cast<std::size_t>(g.panels)));
    g.order = static_cast<int>(n.count("order", static_cast<std::size_t>(g.order), 2));
    if (g.order > 64) n.constraint("order", "at most 64");
  } else {
    g.points = n.count("points", g.points, 3);
  }
  n.finish();
  return g;
}

bool on_grid(double t, double h) {
  const double k = t / h;
  return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line number for the message
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ConfigError(ConfigError::Kind::Syntax, "", "line " + std::to_string(line) + ": " + e.what());
  }

  Scenario s;
  json resolved;
  Node root(doc, resolved, "");
  s.name = root.string("name");
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos) {
    root.constraint("name", "must be a non-empty file-name-safe string");
  }
  const std::string mode = root.string("mode");
  s.mode = at_key("mode", [&] { return mode_from_name(mode); });

  const bool needs_model = s.mode != Mode::Verify;
  if (needs_model || root.has("model")) s.model = parse_model(root.child("model", needs_model));

  const bool needs_datum = s.mode == Mode::Evolve || s.mode == Mode::Blowup || s.mode == Mode::Approx;
  if (needs_datum || root.has("datum")) s.datum = parse_datum(root.child("datum", needs_datum), s.model);

  if (needs_datum || root.has("time")) {
    Node t = root.child("time", needs_datum);
    s.T = t.positive("T");
    s.h = t.positive("h");
    if (s.h > s.T) t.constraint("h", "must not exceed T");
    at_key(t.key_path("h"), [&] { return step_count(s.T, s.h); });
    t.finish();
  }

  if (needs_datum || root.has("solver")) {
    Node sv = root.child("solver");
    s.blowup_guard = sv.positive("blowup_guard", s.blowup_guard);
    sv.finish();
  }

  if (s.mode == Mode::Evolve || root.has("outputs")) {
    Node o = root.child("outputs");
    s.outputs.snapshots = o.numbers("snapshots", {});
    for (std::size_t i = 0; i < s.outputs.snapshots.size(); ++i) {
      const double t = s.outputs.snapshots[i];
      if (t < 0.0 || t > s.T * (1.0 + 1e-12) || !on_grid(t, s.h)) {
        throw ConfigError(ConfigError::Kind::Constraint, "outputs.snapshots[" + std::to_string(i) + "]",
                          "snapshot times must be multiples of time.h in [0, T]");
      }
    }
    s.outputs.charge = o.boolean("charge", true);
    s.outputs.observables = o.boolean("observables", true);
    s.outputs.grid = parse_grid(o.child("grid"));
    o.finish();
  }

  if (s.mode == Mode::Spectrum || root.has("spectrum")) {
    Node n = root.child("spectrum");
    s.spectrum.alpha_min = n.number("alpha_min", s.spectrum.alpha_min);
    s.spectrum.alpha_max = n.number("alpha_max", s.spectrum.alpha_max);
    if (!(s.spectrum.alpha_max >= s.spectrum.alpha_min)) n.constraint("alpha_max", "must be >= alpha_min");
    s.spectrum.count = n.count("count", s.spectrum.count);
    n.finish();
  }

  if (s.mode == Mode::StandingWave || root.has("standing_wave")) {
    if (s.model.is_linear()) {
      throw ConfigError(ConfigError::Kind::Constraint, "model.coupling", "standing waves need a nonlinear coupling");
    }
    Node n = root.child("standing_wave");
    auto& w = s.standing_wave;
    w.omega_min = n.positive("omega_min", w.omega_min);
    w.omega_max = n.positive("omega_max", w.omega_max);
    if (!(w.omega_max >= w.omega_min)) n.constraint("omega_max", "must be >= omega_min");
    w.count = n.count("count", w.count);
    w.profile_points = n.count("profile_points", w.profile_points, 2);
    w.profile_extent = n.positive("profile_extent", w.profile_extent);
    n.finish();
    const auto& c = s.model.nonlinear_coupling();
    for (double om : {w.omega_min, w.omega_max}) {
      at_key("standing_wave.omega_min", [&] { return bound_state(s.model.dim(), c.beta, c.sigma, om); });
    }
  }

  if (s.mode == Mode::Blowup || root.has("blowup")) {
    Node n = root.child("blowup");
    const auto win = n.numbers("window", {s.blowup.window.first, s.blowup.window.second});
    if (win.size() != 2 || !(win[0] >= 0.0) || !(win[1] > win[0]) || win[1] > s.T * (1.0 + 1e-12)) {
      n.constraint("window", "must be [t0, t1] with 0 <= t0 < t1 <= T");
    }
    s.blowup.window = {win[0], win[1]};
    auto& r = s.blowup.restart;
    r.max_phase_step = n.positive("max_phase_step", r.max_phase_step);
    r.max_restarts = static_cast<int>(n.count("max_restarts", static_cast<std::size_t>(r.max_restarts), 0));
    r.h_min = n.positive("h_min", r.h_min);
    n.finish();
    if (s.model.is_linear()) {
      throw ConfigError(ConfigError::Kind::Constraint, "model.coupling", "blow-up runs need a nonlinear coupling");
    }
  }

  if (s.mode == Mode::Approx || root.has("approx")) {
    if (s.model.dim() != Dim::One) {
      throw ConfigError(ConfigError::Kind::Constraint, "model.d", "the concentrated-potential comparison is 1-d only");
    }
    Node n = root.child("approx");
    auto& a = s.approx;
    a.profile = n.string("profile", a.profile);
    if (a.profile != "gaussian" && a.profile != "box") n.constraint("profile", "must be 'gaussian' or 'box'");
    if (a.profile == "box") a.box_half_width = n.positive("box_half_width", a.box_half_width);
    a.eps = n.numbers("eps", a.eps);
    if (a.eps.empty()) n.constraint("eps", "must not be empty");
    for (double e : a.eps) {
      if (!(e > 0.0)) n.constraint("eps", "entries must be positive");
    }
    a.half_width = n.positive("half_width", a.half_width);
    a.n = n.count("n", a.n, 16);
    a.dt = n.positive("dt", a.dt);
    a.frames = n.count("frames", a.frames);
    a.timing = n.boolean("timing", a.timing);
    n.finish();
    if (s.mode == Mode::Approx) {
      at_key("approx.dt", [&] { return step_count(s.T, a.dt); });
      if (step_count(s.T, a.dt) % a.frames != 0) n.constraint("frames", "must divide T / dt");
      if (step_count(s.T, s.h) % a.frames != 0) n.constraint("frames", "must divide T / time.h");
    }
  }

  if (s.mode == Mode::Verify || root.has("verify")) {
    Node n = root.child("verify");
    const auto ids = n.numbers("criteria", {});
    for (double id : ids) {
      if (id != std::floor(id) || id < 1 || id > 11) n.constraint("criteria", "entries must be integers in 1..11");
      s.verify.criteria.push_back(static_cast<int>(id));
    }
    n.finish();
  }

  root.finish();
  s.resolved = std::move(resolved);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(ConfigError::Kind::Syntax, "", "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace deltanls
