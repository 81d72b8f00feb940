#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace dyadshift {

/// Experiment configuration. Suite parameters and pass thresholds are JSON objects whose
/// keys each suite documents in list_suites(); missing keys take the suite defaults and
/// unknown keys are rejected.
struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json thresholds = nlohmann::json::object();
  std::string out_dir;  // empty: no files written

  /// Throws ConfigError on a malformed document or a missing seed.
  static SuiteConfig from_json(const nlohmann::json& j);
  static SuiteConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // formatted cells, one row per configuration
  std::map<std::string, double> metrics;       // fitted constants, maxima, ...
  std::vector<std::string> failures;           // one message per failed criterion
  std::string environment;
  double runtime_seconds = 0.0;  // not part of any output file

  bool passed() const { return failures.empty(); }
  void add_row(std::vector<std::string> cells);
  void fail(std::string message) { failures.push_back(std::move(message)); }
};

/// Cell formatting shared by all suites (doubles round-trip exactly).
std::string cell(double x);
std::string cell(int x);
std::string cell(std::size_t x);
std::string cell(bool x);

enum class GrowthModel { min_i, min_i_min_j };

struct GrowthPoint {
  std::vector<int> key;  // (i1, i2) or (i1, i2, j1, j2)
  double estimate = 0.0;
};

struct GrowthFit {
  double least_squares = 0.0;  // argmin_C sum (estimate - C model)^2
  double max_ratio = 0.0;      // smallest C with estimate <= C model everywhere
  std::vector<int> argmax;
};

/// (min(i1,i2)+1) or (min(i1,i2)+1)(min(j1,j2)+1).
double growth_model(GrowthModel model, const std::vector<int>& key);
/// Needs at least four points; throws ConfigError otherwise.
GrowthFit fit_growth(const std::vector<GrowthPoint>& rows, GrowthModel model);

std::string to_csv(const SuiteReport& report);
nlohmann::json summary_json(const SuiteReport& report);

/// Parsed JSON summary.
struct SuiteSummary {
  std::string suite;
  std::uint64_t seed = 0;
  bool pass = false;
  std::size_t rows = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> failures;
  std::string environment;

  static SuiteSummary from_json(const nlohmann::json& j);
  bool operator==(const SuiteSummary&) const = default;
};

/// Writes <dir>/<suite>.csv and <dir>/<suite>.json; throws std::runtime_error when the
/// directory cannot be created or a file cannot be written.
void emit(const SuiteReport& report, const std::string& dir);

struct SuiteInfo {
  std::string name;
  std::string description;
  nlohmann::json default_params;
  nlohmann::json default_thresholds;
};

std::vector<SuiteInfo> list_suites();

/// Parses and range-checks the suite parameters without running anything.
void validate_config(const SuiteConfig& config);

/// Validates, runs and (when out_dir is set) emits the suite.
SuiteReport run_suite(const SuiteConfig& config);

/// 0 when every criterion passed, 1 otherwise.
int exit_code(const SuiteReport& report);

/// Compiler and build stamp recorded in every summary.
std::string environment_stamp();

}  // namespace dyadshift
