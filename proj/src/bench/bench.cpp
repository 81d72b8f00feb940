#include "dyadshift/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "suites.hpp"

namespace dyadshift {

using nlohmann::json;

namespace bench {

Params::Params(const json& given, const json& defaults, const std::string& what)
    : values_(defaults), what_(what) {
  if (!given.is_object()) throw ConfigError(what + " must be a JSON object");
  for (const auto& [key, value] : given.items()) {
    if (!defaults.contains(key)) throw ConfigError("unknown " + what + " key '" + key + "'");
    values_[key] = value;
  }
}

const json& Params::at(const std::string& key) const {
  if (!values_.contains(key)) throw ConfigError("missing " + what_ + " key '" + key + "'");
  return values_.at(key);
}

template <class T>
T Params::as(const std::string& key) const {
  try {
    return at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(what_ + " key '" + key + "' has the wrong type");
  }
}

int Params::integer(const std::string& key) const {
  if (!at(key).is_number_integer()) throw ConfigError(what_ + " key '" + key + "' must be an integer");
  return as<int>(key);
}
double Params::real(const std::string& key) const {
  if (!at(key).is_number()) throw ConfigError(what_ + " key '" + key + "' must be a number");
  return as<double>(key);
}
std::string Params::text(const std::string& key) const { return as<std::string>(key); }
bool Params::flag(const std::string& key) const {
  if (!at(key).is_boolean()) throw ConfigError(what_ + " key '" + key + "' must be a boolean");
  return at(key).get<bool>();
}
std::vector<int> Params::integers(const std::string& key) const { return as<std::vector<int>>(key); }
std::vector<double> Params::reals(const std::string& key) const { return as<std::vector<double>>(key); }
std::vector<std::vector<int>> Params::integer_lists(const std::string& key) const {
  return as<std::vector<std::vector<int>>>(key);
}
std::vector<std::vector<double>> Params::real_lists(const std::string& key) const {
  return as<std::vector<std::vector<double>>>(key);
}

int Params::integer_in(const std::string& key, int lo, int hi) const {
  const int v = integer(key);
  if (v < lo || v > hi)
    throw ConfigError(what_ + " key '" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double Params::real_in(const std::string& key, double lo, double hi) const {
  const double v = real(key);
  if (!(v >= lo && v <= hi)) throw ConfigError(what_ + " key '" + key + "' out of range");
  return v;
}

void check_depths(const std::vector<int>& depths, int level, const char* what) {
  for (int d : depths)
    if (d < 0 || d > level - 1)
      throw ConfigError(std::string(what) + ": depth " + std::to_string(d) + " exceeds level " +
                        std::to_string(level) + " - 1");
}

std::string fmt_key(const std::vector<int>& key) {
  std::string s;
  for (std::size_t k = 0; k < key.size(); ++k) s += (k ? "_" : "") + std::to_string(key[k]);
  return s;
}

namespace {

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = [] {
    std::vector<SuiteDef> d;
    add_exact_suites(d);
    add_growth_suites(d);
    add_random_suites(d);
    return d;
  }();
  return defs;
}

const SuiteDef& find_suite(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace

}  // namespace bench

SuiteConfig SuiteConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "suite" && key != "seed" && key != "params" && key != "thresholds" && key != "out")
      throw ConfigError("unknown config key '" + key + "'");
  SuiteConfig c;
  if (!j.contains("suite") || !j["suite"].is_string()) throw ConfigError("config needs a suite name");
  c.suite = j["suite"].get<std::string>();
  if (!j.contains("seed") || !j["seed"].is_number_integer() || (!j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0))
    throw ConfigError("config needs a non-negative integer seed");
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("params")) c.params = j["params"];
  if (j.contains("thresholds")) c.thresholds = j["thresholds"];
  if (!c.params.is_object() || !c.thresholds.is_object()) throw ConfigError("params and thresholds must be objects");
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a path");
    c.out_dir = j["out"].get<std::string>();
  }
  return c;
}

SuiteConfig SuiteConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

json SuiteConfig::to_json() const {
  json j{{"suite", suite}, {"seed", seed}, {"params", params}, {"thresholds", thresholds}};
  if (!out_dir.empty()) j["out"] = out_dir;
  return j;
}

void SuiteReport::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw std::logic_error("row width does not match the columns of " + suite);
  rows.push_back(std::move(cells));
}

std::string cell(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string cell(int x) { return std::to_string(x); }
std::string cell(std::size_t x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }

double growth_model(GrowthModel model, const std::vector<int>& key) {
  if (key.size() < 2 || (model == GrowthModel::min_i_min_j && key.size() < 4))
    throw ConfigError("growth key too short for the model");
  const double a = std::min(key[0], key[1]) + 1.0;
  return model == GrowthModel::min_i ? a : a * (std::min(key[2], key[3]) + 1.0);
}

GrowthFit fit_growth(const std::vector<GrowthPoint>& rows, GrowthModel model) {
  if (rows.empty()) throw ConfigError("no growth rows to fit");
  if (rows.size() < 4) throw ConfigError("growth fit needs at least four parameter points");
  GrowthFit fit;
  double num = 0.0, den = 0.0;
  for (const auto& r : rows) {
    const double m = growth_model(model, r.key);
    num += r.estimate * m;
    den += m * m;
    const double ratio = r.estimate / m;
    if (fit.argmax.empty() || ratio > fit.max_ratio) {
      fit.max_ratio = ratio;
      fit.argmax = r.key;
    }
  }
  fit.least_squares = num / den;
  return fit;
}

std::string to_csv(const SuiteReport& report) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(report.columns);
  for (const auto& r : report.rows) line(r);
  return out;
}

namespace {

json metric_value(double v) {
  if (std::isfinite(v)) return v;
  return cell(v);
}

double metric_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  const std::string s = v.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

}  // namespace

json summary_json(const SuiteReport& report) {
  json metrics = json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = metric_value(v);
  return json{{"suite", report.suite},
              {"seed", report.seed},
              {"pass", report.passed()},
              {"rows", report.rows.size()},
              {"metrics", metrics},
              {"failures", report.failures},
              {"environment", report.environment}};
}

SuiteSummary SuiteSummary::from_json(const json& j) {
  try {
    SuiteSummary s;
    s.suite = j.at("suite").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.pass = j.at("pass").get<bool>();
    s.rows = j.at("rows").get<std::size_t>();
    for (const auto& [k, v] : j.at("metrics").items()) s.metrics[k] = metric_from(v);
    s.failures = j.at("failures").get<std::vector<std::string>>();
    s.environment = j.at("environment").get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed summary: ") + e.what());
  }
}

void emit(const SuiteReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  write(fs::path(dir) / (report.suite + ".csv"), to_csv(report));
  write(fs::path(dir) / (report.suite + ".json"), summary_json(report).dump(2) + "\n");
}

std::vector<SuiteInfo> list_suites() {
  std::vector<SuiteInfo> out;
  for (const auto& d : bench::registry()) out.push_back({d.name, d.description, d.params, d.thresholds});
  return out;
}

void validate_config(const SuiteConfig& config) {
  const auto& def = bench::find_suite(config.suite);
  const bench::Params p(config.params, def.params, "params");
  const bench::Params t(config.thresholds, def.thresholds, "thresholds");
  def.validate(p, t);
}

SuiteReport run_suite(const SuiteConfig& config) {
  validate_config(config);
  const auto& def = bench::find_suite(config.suite);
  const bench::Params p(config.params, def.params, "params");
  const bench::Params t(config.thresholds, def.thresholds, "thresholds");
  SuiteReport report;
  report.suite = config.suite;
  report.seed = config.seed;
  report.environment = environment_stamp();
  const auto start = std::chrono::steady_clock::now();
  def.run(config, p, t, report);
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.out_dir.empty()) emit(report, config.out_dir);
  return report;
}

int exit_code(const SuiteReport& report) { return report.passed() ? 0 : 1; }

std::string environment_stamp() {
  std::ostringstream s;
#if defined(__clang__)
  s << "clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  s << "gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#else
  s << "unknown compiler";
#endif
  s << ", C++" << __cplusplus / 100 % 100;
#ifdef NDEBUG
  s << ", optimized";
#else
  s << ", debug";
#endif
  return s.str();
}

}  // namespace dyadshift
