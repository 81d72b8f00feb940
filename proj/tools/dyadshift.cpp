#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>

#include "dyadshift/bench.hpp"
#include "dyadshift/common.hpp"
#include "dyadshift/generators.hpp"
#include "dyadshift/serialize.hpp"

namespace {

constexpr int kInvalidConfig = 2;

int run(const std::string& suite, const std::string& config_path, const std::string& out) {
  dyadshift::SuiteConfig config = dyadshift::SuiteConfig::load(config_path);
  if (!suite.empty()) {
    if (config.suite != suite)
      throw dyadshift::ConfigError("config is for suite '" + config.suite + "', not '" + suite + "'");
  }
  if (!out.empty()) config.out_dir = out;
  const dyadshift::SuiteReport report = dyadshift::run_suite(config);
  for (const auto& f : report.failures) std::cerr << "FAIL: " << f << '\n';
  std::cerr << report.suite << ": " << (report.passed() ? "pass" : "fail") << " (" << report.rows.size()
            << " rows, " << report.runtime_seconds << " s)\n";
  if (config.out_dir.empty()) std::cout << dyadshift::to_csv(report);
  return dyadshift::exit_code(report);
}

// Writes a random two-parameter kernel fixture and a matching input field.
int make_fixture(int level, const std::vector<int>& depths, int d, std::uint64_t seed, const std::string& dir) {
  using namespace dyadshift;
  if (depths.size() != 4) throw ConfigError("--depths takes i1 i2 j1 j2");
  if (level < 1 || level > 5) throw ConfigError("--level must lie in [1, 5]");
  const GridAxis a1(0, 1, level), a2(1, 1, level);
  const ShiftSpec2P spec = random_shift_2p(a1, a2, d, {depths[0], depths[1], depths[2], depths[3]}, seed);
  Rng rng(derive_seed(seed, 1));
  const DiscreteField f = random_field({a1, a2}, LatticeSpec::flat(d, 2.0), rng);
  std::filesystem::create_directories(dir);
  io::write_file(dir + "/kernel.json", io::to_json(spec));
  io::write_file(dir + "/field.json", io::to_json(f));
  std::cout << dir << "/kernel.json\n" << dir << "/field.json\n";
  return 0;
}

// Direct two-parameter evaluation against the nested and compiled forms on a fixture.
int check_fixture(const std::string& kernel, const std::string& field, double tolerance) {
  using namespace dyadshift;
  const ShiftSpec2P spec = io::shift_2p_from_json(io::read_file(kernel));
  const DiscreteField f = io::field_from_json(io::read_file(field));
  const DiscreteField direct = apply_shift_2p(spec, f);
  const double scale = std::max({max_abs(direct), max_abs(f), 1e-300});
  const double dev = std::max(max_abs_diff(direct, nest_biparameter(spec, f)),
                              max_abs_diff(direct, CompiledShift2P(spec).apply(f)));
  std::cout << "max_abs_dev " << cell(dev) << "\nmax_rel_dev " << cell(dev / scale) << '\n';
  return dev / scale <= tolerance ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic shift and paraproduct experiments"};
  app.require_subcommand(1);

  std::string suite, config_path, out;
  auto* run_cmd = app.add_subcommand("run", "Run a suite and write CSV rows and a JSON summary");
  run_cmd->add_option("--suite", suite, "Suite name (must match the config)")->required();
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", out, "Output directory (overrides the config)");

  auto* list_cmd = app.add_subcommand("list-suites", "List suites with their default parameters");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("--config", validate_path, "JSON config file")->required();

  std::string fixture_dir;
  int fixture_level = 3, fixture_d = 1;
  std::uint64_t fixture_seed = 1;
  std::vector<int> fixture_depths{0, 0, 0, 0};
  auto* make_cmd = app.add_subcommand("make-fixture", "Write a random two-parameter kernel and input field as JSON");
  make_cmd->add_option("--out", fixture_dir, "Output directory")->required();
  make_cmd->add_option("--level", fixture_level, "Grid level per axis");
  make_cmd->add_option("--depths", fixture_depths, "Block depths i1 i2 j1 j2")->expected(4);
  make_cmd->add_option("--d", fixture_d, "Lattice dimension");
  make_cmd->add_option("--seed", fixture_seed, "Seed");

  std::string kernel_path, field_path;
  double tolerance = 1e-11;
  auto* check_cmd =
      app.add_subcommand("check-fixture", "Compare direct and nested evaluation of a two-parameter kernel fixture");
  check_cmd->add_option("--kernel", kernel_path, "Kernel fixture JSON")->required();
  check_cmd->add_option("--field", field_path, "Input field JSON")->required();
  check_cmd->add_option("--tolerance", tolerance, "Relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidConfig;
  }

  try {
    if (*run_cmd) return run(suite, config_path, out);
    if (*list_cmd) {
      for (const auto& s : dyadshift::list_suites()) {
        std::cout << s.name << "\n  " << s.description << "\n  params: " << s.default_params.dump()
                  << "\n  thresholds: " << s.default_thresholds.dump() << '\n';
      }
      return 0;
    }
    if (*make_cmd) return make_fixture(fixture_level, fixture_depths, fixture_d, fixture_seed, fixture_dir);
    if (*check_cmd) return check_fixture(kernel_path, field_path, tolerance);
    if (*validate_cmd) {
      dyadshift::validate_config(dyadshift::SuiteConfig::load(validate_path));
      std::cout << "ok\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
