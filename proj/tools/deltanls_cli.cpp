// deltanls: scenario-driven front end.
//
//   deltanls evolve --config run.json --out results/
//   deltanls verify [--config suite.json] [--tolerance-profile strict]
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 verification failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "deltanls/scenario.hpp"
#include "deltanls/verify.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  unsigned threads = 1;
  std::string profile = "default";
  std::vector<int> criteria;
};

int dispatch(deltanls::Mode mode, const Options& o) {
  using namespace deltanls;
  RunContext ctx;
  ctx.out_dir = o.out;
  ctx.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  ctx.strict = o.profile == "strict";

  if (mode == Mode::Verify && o.config.empty()) {
    const auto results = verify::run_acceptance(
        o.criteria, ctx.strict ? verify::Profile::Strict : verify::Profile::Default, ctx.threads, std::cout);
    for (const auto& r : results) {
      if (!r.passed) return kExitVerification;
    }
    return kExitOk;
  }

  Scenario s = load_scenario(o.config);
  if (s.mode != mode) {
    throw ConfigError(ConfigError::Kind::Constraint, "mode",
                      std::string("scenario is '") + mode_name(s.mode) + "' but the subcommand is '" + mode_name(mode) +
                          "'");
  }
  if (mode == Mode::Verify && !o.criteria.empty()) s.verify.criteria = o.criteria;
  std::filesystem::create_directories(ctx.out_dir);
  return run_scenario(s, ctx, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  using deltanls::Mode;
  CLI::App app{"Point-concentrated nonlinear Schrodinger solver"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--tolerance-profile", o.profile, "Verification thresholds")
      ->check(CLI::IsMember({"default", "strict"}))
      ->capture_default_str();

  const std::pair<const char*, Mode> commands[] = {
      {"evolve", Mode::Evolve},       {"spectrum", Mode::Spectrum}, {"standing-wave", Mode::StandingWave},
      {"blowup", Mode::Blowup},       {"approx", Mode::Approx},     {"verify", Mode::Verify},
  };
  std::vector<std::pair<CLI::App*, Mode>> subs;
  for (const auto& [name, mode] : commands) {
    auto* sub = app.add_subcommand(name, std::string("Run a '") + name + "' scenario");
    // Global flags are also accepted after the subcommand name.
    sub->fallthrough();
    auto* cfg = sub->add_option("--config", o.config, "Scenario file (JSON)")->check(CLI::ExistingFile);
    if (mode == Mode::Verify) {
      sub->add_option("--criteria", o.criteria, "Subset of acceptance criteria (1-11)")->check(CLI::Range(1, 11));
    } else {
      cfg->required();
    }
    subs.emplace_back(sub, mode);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : deltanls::kExitConfig;
  }

  Mode mode = Mode::Evolve;
  for (const auto& [sub, m] : subs) {
    if (sub->parsed()) mode = m;
  }

  try {
    return dispatch(mode, o);
  } catch (const deltanls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return deltanls::kExitConfig;
  } catch (const deltanls::ConstraintError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return deltanls::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return deltanls::kExitNumerical;
  }
}
