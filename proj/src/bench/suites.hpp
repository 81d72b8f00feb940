#pragma once

#include <chrono>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dyadshift/bench.hpp"
#include "dyadshift/common.hpp"

namespace dyadshift::bench {

/// Typed view of a parameter object over its defaults; unknown keys are rejected.
class Params {
 public:
  Params(const nlohmann::json& given, const nlohmann::json& defaults, const std::string& what);

  int integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::vector<int>> integer_lists(const std::string& key) const;
  std::vector<std::vector<double>> real_lists(const std::string& key) const;

  /// Throws ConfigError unless lo <= value <= hi.
  int integer_in(const std::string& key, int lo, int hi) const;
  double real_in(const std::string& key, double lo, double hi) const;

 private:
  const nlohmann::json& at(const std::string& key) const;
  template <class T>
  T as(const std::string& key) const;

  nlohmann::json values_;
  std::string what_;
};

struct SuiteDef {
  std::string name;
  std::string description;
  nlohmann::json params;
  nlohmann::json thresholds;
  /// Parses and checks everything; must not run the experiment.
  std::function<void(const Params&, const Params&)> validate;
  /// Fills columns, rows, metrics and failures.
  std::function<void(const SuiteConfig&, const Params&, const Params&, SuiteReport&)> run;
};

void add_exact_suites(std::vector<SuiteDef>& out);
void add_growth_suites(std::vector<SuiteDef>& out);
void add_random_suites(std::vector<SuiteDef>& out);

/// Throws ConfigError unless every depth fits below the finest level.
void check_depths(const std::vector<int>& depths, int level, const char* what);

std::string fmt_key(const std::vector<int>& key);

}  // namespace dyadshift::bench
