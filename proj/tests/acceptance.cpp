// Runs every experiment suite from the shipped configs and prints one PASS/FAIL line per
// acceptance criterion. Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "dyadshift/bench.hpp"

#ifndef DYADSHIFT_CONFIG_DIR
#error "DYADSHIFT_CONFIG_DIR must point at the suite configs"
#endif

using namespace dyadshift;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  double budget_seconds;
};

struct Outcome {
  SuiteReport report;
  std::string csv;
  std::string error;
};

Outcome run(const std::string& suite) {
  Outcome o;
  try {
    SuiteConfig c = SuiteConfig::load(std::string(DYADSHIFT_CONFIG_DIR) + "/" + suite + ".json");
    c.out_dir.clear();
    o.report = run_suite(c);
    o.csv = to_csv(o.report);
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Haar calculus exactness", {"haar-calculus"}, 10},
      {2, "two-parameter shift equals nested one-parameter shifts", {"nested-shift-identity"}, 60},
      {3, "model operator reduction", {"model-reduction"}, 10},
      {4, "scalar L2 contraction", {"l2-contraction"}, 60},
      {5, "shift growth bound", {"shift-growth"}, 300},
      {6, "partial paraproduct growth", {"partial-paraproduct-growth"}, 300},
      {7, "paraproduct R-bounds", {"paraproduct-rbound-1p", "paraproduct-rbound-full", "paraproduct-rbound-mixed"}, 300},
      {8, "tri-parameter partial paraproducts", {"tri-partial-type1", "tri-partial-type2"}, 300},
      {9, "decoupling", {"decoupling"}, 120},
      {10, "stopping cubes and sparse families", {"stopping-sparse"}, 60},
      {11, "key estimate", {"key-estimate"}, 60},
      {12, "Khintchine-Maurey and Fefferman-Stein", {"khintchine-maurey", "fefferman-stein"}, 120},
  };

  std::map<std::string, Outcome> first;
  bool all = true;
  for (const auto& c : criteria) {
    bool ok = true;
    double seconds = 0.0;
    std::vector<std::string> notes;
    for (const auto& s : c.suites) {
      Outcome o = run(s);
      if (!o.error.empty()) {
        ok = false;
        notes.push_back(s + ": " + o.error);
      } else {
        seconds += o.report.runtime_seconds;
        if (!o.report.passed()) ok = false;
        for (const auto& f : o.report.failures) notes.push_back(s + ": " + f);
      }
      first.emplace(s, std::move(o));
    }
    if (seconds >= c.budget_seconds) {
      ok = false;
      notes.push_back("runtime " + cell(seconds) + " s exceeds " + cell(c.budget_seconds) + " s");
    }
    all = all && ok;
    std::printf("criterion %d (%s): %s [%.2f s]\n", c.id, c.title.c_str(), ok ? "PASS" : "FAIL", seconds);
    for (std::size_t k = 0; k < notes.size() && k < 10; ++k) std::printf("    %s\n", notes[k].c_str());
    std::fflush(stdout);
  }

  bool same = true;
  std::vector<std::string> diverged;
  for (const auto& [suite, o] : first) {
    const Outcome again = run(suite);
    if (!o.error.empty() || !again.error.empty() || again.csv != o.csv) {
      same = false;
      diverged.push_back(suite);
    }
  }
  all = all && same;
  std::printf("criterion 13 (determinism): %s\n", same ? "PASS" : "FAIL");
  for (const auto& s : diverged) std::printf("    %s: CSV differs between runs\n", s.c_str());
  return all ? 0 : 1;
}
