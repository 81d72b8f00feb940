#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyadshift/bench.hpp"
#include "dyadshift/common.hpp"

using namespace dyadshift;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dyadshift_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SuiteConfig haar_config(std::uint64_t seed) {
  return SuiteConfig::from_json(json{{"suite", "haar-calculus"},
                                     {"seed", seed},
                                     {"params", {{"cases", {{1, 1, 3, 1}, {2, 1, 2, 2}}}}}});
}

}  // namespace

TEST_CASE("fit_growth recovers an exact model constant") {
  std::vector<GrowthPoint> rows;
  for (int i1 = 0; i1 < 3; ++i1)
    for (int i2 = 0; i2 < 3; ++i2) {
      const std::vector<int> key{i1, i2, 1, 2};
      rows.push_back({key, 2.0 * growth_model(GrowthModel::min_i_min_j, key)});
    }
  const GrowthFit fit = fit_growth(rows, GrowthModel::min_i_min_j);
  CHECK(fit.least_squares == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.max_ratio == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("fit_growth of constant rows peaks at the smallest model value") {
  std::vector<GrowthPoint> rows;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows.push_back({{i, j}, 1.5});
  const GrowthFit fit = fit_growth(rows, GrowthModel::min_i);
  CHECK(fit.max_ratio == doctest::Approx(1.5));
  CHECK(growth_model(GrowthModel::min_i, fit.argmax) == 1.0);
  CHECK(fit.least_squares < fit.max_ratio);
}

TEST_CASE("fit_growth needs four points") {
  CHECK_THROWS_AS(fit_growth({}, GrowthModel::min_i), ConfigError);
  CHECK_THROWS_AS(fit_growth({{{0, 0}, 1.0}, {{1, 1}, 1.0}, {{0, 1}, 1.0}}, GrowthModel::min_i), ConfigError);
  CHECK_THROWS_AS(growth_model(GrowthModel::min_i_min_j, {0, 0}), ConfigError);
}

TEST_CASE("empty report writes only the header") {
  SuiteReport r;
  r.suite = "empty";
  r.columns = {"a", "b"};
  CHECK(to_csv(r) == "a,b\n");
  CHECK_THROWS(r.add_row({"1"}));
}

TEST_CASE("cells round-trip doubles") {
  const double x = 0.1 + 0.2;
  CHECK(std::stod(cell(x)) == x);
  CHECK(cell(true) == "true");
  CHECK(cell(3) == "3");
}

TEST_CASE("summary round-trips through JSON") {
  SuiteReport r;
  r.suite = "demo";
  r.seed = 42;
  r.columns = {"x"};
  r.add_row({"1"});
  r.metrics["C"] = 1.25;
  r.metrics["spread"] = INFINITY;
  r.fail("spread too large");
  r.environment = environment_stamp();
  const SuiteSummary s = SuiteSummary::from_json(json::parse(summary_json(r).dump()));
  CHECK(s.suite == "demo");
  CHECK(s.seed == 42);
  CHECK(!s.pass);
  CHECK(s.rows == 1);
  CHECK(s.metrics.at("C") == 1.25);
  CHECK(std::isinf(s.metrics.at("spread")));
  CHECK(s.failures == r.failures);
  CHECK(s == SuiteSummary::from_json(summary_json(r)));
  CHECK_THROWS_AS(SuiteSummary::from_json(json{{"suite", "x"}}), ConfigError);
}

TEST_CASE("config parsing rejects malformed documents") {
  CHECK_THROWS_AS(SuiteConfig::from_json(json{{"suite", "haar-calculus"}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json(json{{"suite", "haar-calculus"}, {"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json(json{{"suite", "haar-calculus"}, {"seed", 1}, {"extra", 0}}), ConfigError);
  const SuiteConfig c = haar_config(3);
  CHECK(SuiteConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("unknown suites and keys are rejected before running") {
  CHECK_THROWS_AS(validate_config(SuiteConfig::from_json(json{{"suite", "nope"}, {"seed", 1}})), ConfigError);
  CHECK_THROWS_AS(
      validate_config(SuiteConfig::from_json(json{{"suite", "haar-calculus"}, {"seed", 1}, {"params", {{"bogus", 1}}}})),
      ConfigError);
  CHECK_THROWS_AS(validate_config(SuiteConfig::from_json(
                      json{{"suite", "haar-calculus"}, {"seed", 1}, {"params", {{"cases", {{1, 1, 9, 1}}}}}})),
                  ConfigError);
}

TEST_CASE("depth overflow is rejected without writing output") {
  const auto dir = scratch_dir("overflow");
  SuiteConfig c = SuiteConfig::from_json(
      json{{"suite", "nested-shift-identity"}, {"seed", 7}, {"params", {{"level", 3}, {"depths", {0, 3}}}}});
  c.out_dir = dir.string();
  try {
    run_suite(c);
    FAIL("depth overflow accepted");
  } catch (const std::invalid_argument&) {
  }
  CHECK(!std::filesystem::exists(dir));
}

TEST_CASE("every registered suite validates its defaults") {
  const auto suites = list_suites();
  CHECK(suites.size() == 16);
  for (const auto& s : suites) {
    CAPTURE(s.name);
    CHECK_NOTHROW(validate_config(SuiteConfig::from_json(json{{"suite", s.name}, {"seed", 1}})));
    CHECK(!s.description.empty());
  }
}

TEST_CASE("runs are deterministic and emit both files") {
  const auto dir = scratch_dir("determinism");
  SuiteConfig c = haar_config(11);
  c.out_dir = dir.string();
  const SuiteReport first = run_suite(c);
  CHECK(first.passed());
  CHECK(exit_code(first) == 0);
  const std::string csv = slurp(dir / "haar-calculus.csv");
  CHECK(csv == to_csv(first));
  const SuiteSummary summary = SuiteSummary::from_json(json::parse(slurp(dir / "haar-calculus.json")));
  CHECK(summary.pass);
  CHECK(summary.rows == first.rows.size());
  run_suite(c);
  CHECK(slurp(dir / "haar-calculus.csv") == csv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("a failed criterion sets exit code 1") {
  SuiteReport r;
  r.fail("synthetic");
  CHECK(exit_code(r) == 1);
}
