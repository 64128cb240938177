#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deltanls/csv.hpp"
#include "deltanls/scenario.hpp"

namespace {

using namespace deltanls;
namespace fs = std::filesystem;

const char* kEvolve = R"({
  "name": "small",
  "mode": "evolve",
  "model": {"d": 1, "beta": -1, "sigma": 1},
  "datum": {"kind": "gaussian", "amplitude": [0.5, 0.1], "width": 1.2},
  "time": {"T": 0.1, "h": 0.01},
  "outputs": {"snapshots": [0.05], "grid": {"kind": "uniform", "extent": 4, "points": 9}}
})";

ConfigError parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for " << text;
  return ConfigError(ConfigError::Kind::Syntax, "", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("deltanls_test_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Parse, HappyPathFillsDefaults) {
  const Scenario s = parse_scenario(kEvolve);
  EXPECT_EQ(s.name, "small");
  EXPECT_EQ(s.mode, Mode::Evolve);
  EXPECT_EQ(s.model.dim(), Dim::One);
  EXPECT_EQ(s.model.nonlinear_coupling().beta, -1.0);
  const auto& g = std::get<Gaussian>(s.datum);
  EXPECT_EQ(g.amplitude, Complex(0.5, 0.1));
  EXPECT_EQ(g.width, 1.2);
  EXPECT_EQ(s.T, 0.1);
  EXPECT_EQ(s.blowup_guard, 1e6);
  EXPECT_EQ(s.outputs.grid.points, 9u);
  EXPECT_TRUE(s.outputs.charge);
  EXPECT_EQ(s.resolved["solver"]["blowup_guard"].get<double>(), 1e6);
  EXPECT_EQ(s.resolved["model"]["coupling"], "nonlinear");
}

TEST(Parse, BoundStateTakesModelDefaults) {
  std::string text = replace(kEvolve, R"({"kind": "gaussian", "amplitude": [0.5, 0.1], "width": 1.2})",
                             R"({"kind": "bound_state", "omega": 2})");
  const Scenario s = parse_scenario(text);
  const auto& b = std::get<BoundStateDatum>(s.datum);
  EXPECT_EQ(b.beta, -1.0);
  EXPECT_EQ(b.sigma, 1.0);
  EXPECT_EQ(b.omega, 2.0);
}

TEST(Parse, UnknownKey) {
  const ConfigError e = parse_error(replace(kEvolve, R"("sigma": 1)", R"("sigma": 1, "gamma": 2)"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::UnknownKey);
  EXPECT_EQ(e.path(), "model.gamma");
}

TEST(Parse, TypeMismatch) {
  const ConfigError e = parse_error(replace(kEvolve, R"("d": 1)", R"("d": "one")"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::TypeMismatch);
  EXPECT_EQ(e.path(), "model.d");
}

TEST(Parse, NonPositiveSigma) {
  const ConfigError e = parse_error(replace(kEvolve, R"("sigma": 1)", R"("sigma": 0)"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::Constraint);
  EXPECT_EQ(e.path(), "model.sigma");
}

TEST(Parse, UnsupportedDimension) {
  const ConfigError e = parse_error(replace(kEvolve, R"("d": 1)", R"("d": 4)"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::Constraint);
  EXPECT_EQ(e.path(), "model.d");
  EXPECT_NE(std::string(e.what()).find("1, 2 or 3"), std::string::npos);
}

TEST(Parse, MissingAndSyntax) {
  EXPECT_EQ(parse_error(replace(kEvolve, R"("time": {"T": 0.1, "h": 0.01},)", "")).kind(), ConfigError::Kind::Missing);
  const ConfigError e = parse_error("{\n  \"name\": \"x\",\n  \"mode\": evolve\n}");
  EXPECT_EQ(e.kind(), ConfigError::Kind::Syntax);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
}

TEST(Parse, StepMustDivideHorizon) {
  const ConfigError e = parse_error(replace(kEvolve, R"("h": 0.01)", R"("h": 0.03)"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::Constraint);
  EXPECT_EQ(e.path(), "time.h");
}

TEST(Parse, GridDatumOnlyOnTheLine) {
  std::string text = replace(kEvolve, R"({"kind": "gaussian", "amplitude": [0.5, 0.1], "width": 1.2})",
                             R"({"kind": "grid", "x0": -1, "dx": 0.5, "values": [0, 1, 0, 0, 0]})");
  EXPECT_NO_THROW(parse_scenario(text));
  const ConfigError e = parse_error(replace(text, R"("d": 1)", R"("d": 3)"));
  EXPECT_EQ(e.kind(), ConfigError::Kind::Constraint);
  EXPECT_EQ(e.path(), "datum.kind");
}

TEST(Run, EvolveIsDeterministic) {
  const Scenario s = parse_scenario(kEvolve);
  const fs::path a = fresh_dir("a");
  const fs::path b = fresh_dir("b");
  std::ostringstream log;
  ASSERT_EQ(run_scenario(s, {a, 1, false}, log), kExitOk);
  ASSERT_EQ(run_scenario(s, {b, 2, false}, log), kExitOk);
  for (const char* f : {"small_charge.csv", "small_snapshot_0.csv", "small_observables.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, CsvCarriesResolvedConfig) {
  const Scenario s = parse_scenario(kEvolve);
  const fs::path dir = fresh_dir("meta");
  std::ostringstream log;
  ASSERT_EQ(run_scenario(s, {dir, 1, false}, log), kExitOk);
  const std::string text = slurp(dir / "small_charge.csv");
  EXPECT_NE(text.find("# model.d=1\n"), std::string::npos);
  EXPECT_NE(text.find("# model.beta=-1\n"), std::string::npos);
  EXPECT_NE(text.find("# solver.blowup_guard=1000000\n"), std::string::npos);
  EXPECT_NE(text.find("\nt,re_q,im_q,abs_q,re_forcing,im_forcing\n"), std::string::npos);
  // first data row: t = 0, q = psi0(0)
  EXPECT_NE(text.find("\n0,0.5,0.10000000000000001,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Csv, NumberFormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(1.0), "1");
}

TEST(Csv, MetadataKeysSorted) {
  const nlohmann::json j = {{"b", {{"y", 2}, {"x", 1}}}, {"a", "s"}, {"c", {1.5, 2}}};
  const auto m = flatten_metadata(j);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m[0].first, "a");
  EXPECT_EQ(m[1].first, "b.x");
  EXPECT_EQ(m[2].first, "b.y");
  EXPECT_EQ(m[3], (std::pair<std::string, std::string>{"c", "[1.5,2]"}));
}

}  // namespace
