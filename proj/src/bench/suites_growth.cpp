#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadshift/generators.hpp"
#include "dyadshift/norms.hpp"
#include "dyadshift/paraproduct.hpp"
#include "suites.hpp"

namespace dyadshift::bench {

using nlohmann::json;

namespace {

double search_norm(const LinearMap& t, const MixedNormSpec& spec, const Params& p, std::uint64_t seed) {
  NormOptions o;
  o.restarts = p.integer("restarts");
  o.max_iterations = p.integer("iterations");
  o.tolerance = 1e-9;
  o.seed = seed;
  return operator_norm(t, spec, spec, NormMethod::ascent_search, o).estimate;
}

void validate_search(const Params& p) {
  p.integer_in("restarts", 1, 1000);
  p.integer_in("iterations", 1, 100000);
}

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

/// Checks max/min of the per-variant constants against the stability factor.
void check_stability(SuiteReport& rep, const std::string& name, const std::vector<double>& cs, double factor) {
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  const double spread = *lo > 0.0 ? *hi / *lo : INFINITY;
  rep.metrics[name + "_spread"] = spread;
  rep.metrics[name + "_C"] = *hi;
  if (!(spread <= factor)) rep.fail(name + ": fitted constants vary by " + cell(spread));
}

// ---------------------------------------------------------------- shift-growth

void validate_shift_growth(const Params& p, const Params& t) {
  const auto levels = p.integers("levels");
  if (levels.empty()) throw ConfigError("shift-growth needs levels");
  const int dim = p.integer_in("dim", 1, 2);
  for (int l : levels)
    if (l < 1 || 2 * l * dim > 10) throw ConfigError("shift-growth level out of range");
  for (int d : p.integers("lattice_dims"))
    if (d < 1 || d > 8) throw ConfigError("shift-growth lattice dimension out of range");
  check_exponent(p.real("lattice_exponent"), "lattice exponent");
  for (const auto& e : p.real_lists("exponents")) {
    if (e.size() != 2) throw ConfigError("shift-growth exponents are [p, q] pairs");
    check_exponent(e[0], "p");
    check_exponent(e[1], "q");
  }
  std::vector<int> depths;
  for (const auto& pr : p.integer_lists("pairs")) {
    if (pr.size() != 2) throw ConfigError("shift-growth pairs are [i1, i2]");
    depths.insert(depths.end(), pr.begin(), pr.end());
  }
  const std::size_t n = p.integer_lists("pairs").size();
  if (n * n < 4) throw ConfigError("shift-growth needs at least four parameter points");
  check_depths(depths, *std::min_element(levels.begin(), levels.end()), "shift-growth");
  p.integer_in("draws", 1, 1000);
  p.integer_in("max_piece_depth", -1, 10);
  p.flag("block_resolution");
  validate_search(p);
  t.real_in("stability", 1.0, 1e6);
}

void run_shift_growth(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"p", "q", "d", "L", "i1", "i2", "j1", "j2", "model", "estimate", "ratio"};
  const auto pairs = p.integer_lists("pairs");
  const int dim = p.integer("dim"), draws = p.integer("draws");
  KernelDraw draw;
  draw.max_piece_depth = p.integer("max_piece_depth");
  draw.block_resolution = p.flag("block_resolution");
  for (const auto& e : p.real_lists("exponents"))
    for (int d : p.integers("lattice_dims")) {
      const std::string tag = "p" + num(e[0]) + "_q" + num(e[1]) + "_d" + std::to_string(d);
      const MixedNormSpec spec{{0, 1}, {e[0], e[1]}, LatticeSpec::flat(d, p.real("lattice_exponent"))};
      std::vector<double> cs;
      for (int level : p.integers("levels")) {
        const GridAxis a1(0, dim, level), a2(1, dim, level);
        std::vector<GrowthPoint> pts;
        std::uint64_t tuple = 0;
        for (const auto& ip : pairs)
          for (const auto& jp : pairs) {
            const std::vector<int> key{ip[0], ip[1], jp[0], jp[1]};
            double est = 0.0;
            for (int k = 0; k < draws; ++k) {
              const std::uint64_t s = derive_seed(cfg.seed, tuple, static_cast<std::uint64_t>(k));
              const ShiftSpec2P shift = random_shift_2p(a1, a2, d, {key[0], key[1], key[2], key[3]}, s, draw);
              est = std::max(est, search_norm(shift_map(shift, spec.lattice), spec, p, derive_seed(s, 2)));
            }
            ++tuple;
            const double model = growth_model(GrowthModel::min_i_min_j, key);
            pts.push_back({key, est});
            rep.add_row({cell(e[0]), cell(e[1]), cell(d), cell(level), cell(key[0]), cell(key[1]), cell(key[2]),
                         cell(key[3]), cell(model), cell(est), cell(est / model)});
          }
        const GrowthFit fit = fit_growth(pts, GrowthModel::min_i_min_j);
        rep.metrics[tag + "_L" + std::to_string(level) + "_C"] = fit.max_ratio;
        rep.metrics[tag + "_L" + std::to_string(level) + "_least_squares"] = fit.least_squares;
        cs.push_back(fit.max_ratio);
      }
      check_stability(rep, tag, cs, t.real("stability"));
    }
}

// ---------------------------------------------------------------- partial-paraproduct-growth

void validate_symbols(const Params& p) {
  const auto s = p.integers("symbols");
  if (s.empty()) throw ConfigError("symbol counts missing");
  for (int n : s)
    if (n < 1 || n > 10000) throw ConfigError("symbol count out of range");
  p.real_in("density", 0.0, 1.0);
}

void validate_partial(const Params& p, const Params& t) {
  const int level = p.integer_in("level", 1, 5);
  p.integer_in("d", 1, 8);
  check_exponent(p.real("lattice_exponent"), "lattice exponent");
  for (const auto& e : p.real_lists("exponent_pairs")) {
    if (e.size() != 2) throw ConfigError("exponent pairs are [outer, inner]");
    check_exponent(e[0], "outer exponent");
    check_exponent(e[1], "inner exponent");
  }
  for (const auto& o : p.integer_lists("orders"))
    if (o != std::vector<int>{0, 1} && o != std::vector<int>{1, 0}) throw ConfigError("orders are [0,1] or [1,0]");
  const auto depths = p.integers("depths");
  check_depths(depths, level, "partial-paraproduct-growth");
  if (depths.size() * depths.size() < 4) throw ConfigError("need at least four parameter points");
  p.integer_in("band", -1, level);
  validate_symbols(p);
  validate_search(p);
  t.real_in("stability", 1.0, 1e6);
}

void run_partial(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"outer_axis", "p_outer", "p_inner", "i1", "i2", "symbol", "estimate"};
  const int level = p.integer("level"), d = p.integer("d");
  const GridAxis a0(0, 1, level), a1(1, 1, level);
  const LatticeSpec lat = LatticeSpec::flat(d, p.real("lattice_exponent"));
  auto counts = p.integers("symbols");
  std::sort(counts.begin(), counts.end());
  const int total = counts.back();
  SymbolDraw draw;
  draw.density = p.real("density");
  const auto depths = p.integers("depths");
  const auto orders = p.integer_lists("orders");
  const auto exps = p.real_lists("exponent_pairs");
  // estimates[variant][tuple][symbol]
  std::vector<std::vector<std::vector<double>>> est(orders.size() * exps.size());
  std::vector<std::vector<int>> keys;
  std::uint64_t tuple = 0;
  for (int i1 : depths)
    for (int i2 : depths) {
      keys.push_back({i1, i2});
      for (auto& v : est) v.emplace_back();
      for (int k = 0; k < total; ++k) {
        const std::uint64_t s = derive_seed(cfg.seed, tuple, static_cast<std::uint64_t>(k));
        const LinearMap map =
            partial_2p_map(random_partial_2p(a0, a1, i1, i2, 1.0, s, draw, p.integer("band")), lat);
        std::size_t v = 0;
        for (const auto& o : orders)
          for (const auto& e : exps) {
            const MixedNormSpec spec{o, e, lat};
            const double n = search_norm(map, spec, p, derive_seed(s, 3, v));
            est[v].back().push_back(n);
            rep.add_row({cell(o[0]), cell(e[0]), cell(e[1]), cell(i1), cell(i2), cell(k), cell(n)});
            ++v;
          }
      }
      ++tuple;
    }
  std::size_t v = 0;
  for (const auto& o : orders)
    for (const auto& e : exps) {
      const std::string tag = "outer" + std::to_string(o[0]) + "_p" + num(e[0]) + "_q" + num(e[1]);
      std::vector<double> cs;
      for (int n : counts) {
        std::vector<GrowthPoint> pts;
        for (std::size_t k = 0; k < keys.size(); ++k)
          pts.push_back({keys[k], *std::max_element(est[v][k].begin(), est[v][k].begin() + n)});
        const GrowthFit fit = fit_growth(pts, GrowthModel::min_i);
        rep.metrics[tag + "_N" + std::to_string(n) + "_C"] = fit.max_ratio;
        cs.push_back(fit.max_ratio);
      }
      check_stability(rep, tag, cs, t.real("stability"));
      ++v;
    }
}

// ---------------------------------------------------------------- tri-partial-type1 / type2

const std::vector<std::vector<int>> kPermutations{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

void validate_tri(const Params& p, const Params& t, bool type1) {
  const int level = p.integer_in("level", 1, 3);
  p.integer_in("d", 1, 4);
  check_exponent(p.real("lattice_exponent"), "lattice exponent");
  const auto e = p.reals("exponents");
  if (e.size() != 3) throw ConfigError("tri-parameter suites need one exponent per axis");
  for (double x : e) check_exponent(x, "axis exponent");
  const auto depths = p.integers("depths");
  check_depths(depths, level, "tri-parameter suite");
  if (depths.size() * depths.size() < 4) throw ConfigError("need at least four parameter points");
  if (type1)
    for (const auto& f : p.integers("flavors"))
      if (f != 0 && f != 1) throw ConfigError("flavors are 0 (full) and 1 (mixed)");
  validate_symbols(p);
  validate_search(p);
  t.real_in("stability", 1.0, 1e6);
}

void run_tri(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep, bool type1) {
  rep.columns = {"order", "flavor", "i1", "i2", "j1", "j2", "symbol", "estimate"};
  const int level = p.integer("level"), d = p.integer("d");
  const GridAxis a0(0, 1, level), a1(1, 1, level), a2(2, 1, level);
  const LatticeSpec lat = LatticeSpec::flat(d, p.real("lattice_exponent"));
  const auto exps = p.reals("exponents");
  auto counts = p.integers("symbols");
  std::sort(counts.begin(), counts.end());
  const int total = counts.back();
  SymbolDraw draw;
  draw.density = p.real("density");
  const auto depths = p.integers("depths");
  const std::vector<int> flavors = type1 ? p.integers("flavors") : std::vector<int>{0};
  std::vector<std::vector<int>> keys;
  if (type1) {
    for (int i1 : depths)
      for (int i2 : depths) keys.push_back({i1, i2});
  } else {
    for (int i1 : depths)
      for (int i2 : depths)
        for (int j1 : depths)
          for (int j2 : depths) keys.push_back({i1, i2, j1, j2});
  }
  const GrowthModel model = type1 ? GrowthModel::min_i : GrowthModel::min_i_min_j;
  for (int flavor : flavors) {
    // est[perm][tuple][symbol]
    std::vector<std::vector<std::vector<double>>> est(kPermutations.size(),
                                                      std::vector<std::vector<double>>(keys.size()));
    for (std::size_t k = 0; k < keys.size(); ++k)
      for (int s = 0; s < total; ++s) {
        const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(flavor) * 1000 + k,
                                               static_cast<std::uint64_t>(s));
        const auto& key = keys[k];
        const LinearMap map =
            type1 ? tri_type1_map(random_tri_type1(a0, a1, a2, key[0], key[1],
                                                   flavor ? ParaproductFlavor::mixed : ParaproductFlavor::standard,
                                                   1.0, seed, draw),
                                  lat)
                  : tri_type2_map(random_tri_type2(a0, a1, a2, {key[0], key[1], key[2], key[3]}, 1.0, seed, draw), lat);
        for (std::size_t q = 0; q < kPermutations.size(); ++q) {
          const auto& perm = kPermutations[q];
          const MixedNormSpec spec{perm, {exps[perm[0]], exps[perm[1]], exps[perm[2]]}, lat};
          const double n = search_norm(map, spec, p, derive_seed(seed, 4, q));
          est[q][k].push_back(n);
          rep.add_row({fmt_key(perm), type1 ? (flavor ? "mixed" : "full") : "none", cell(key[0]), cell(key[1]),
                       type1 ? "" : cell(key[2]), type1 ? "" : cell(key[3]), cell(s), cell(n)});
        }
      }
    for (std::size_t q = 0; q < kPermutations.size(); ++q) {
      const std::string tag =
          "order" + fmt_key(kPermutations[q]) + (type1 ? (flavor ? "_mixed" : "_full") : std::string());
      std::vector<double> cs;
      for (int n : counts) {
        std::vector<GrowthPoint> pts;
        for (std::size_t k = 0; k < keys.size(); ++k)
          pts.push_back({keys[k], *std::max_element(est[q][k].begin(), est[q][k].begin() + n)});
        const GrowthFit fit = fit_growth(pts, model);
        rep.metrics[tag + "_N" + std::to_string(n) + "_C"] = fit.max_ratio;
        cs.push_back(fit.max_ratio);
      }
      check_stability(rep, tag, cs, t.real("stability"));
    }
  }
}

}  // namespace

void add_growth_suites(std::vector<SuiteDef>& out) {
  out.push_back({"shift-growth",
                 "Search-based norms of two-parameter shifts with unit kernels against (min i + 1)(min j + 1).",
                 json{{"levels", {3, 4}},
                      {"dim", 1},
                      {"lattice_dims", {1, 4}},
                      {"lattice_exponent", 2.0},
                      {"exponents", {{2.0, 2.0}, {3.0, 1.5}}},
                      {"pairs", {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {2, 1}}},
                      {"draws", 4},
                      {"max_piece_depth", -1},
                      {"block_resolution", true},
                      {"restarts", 4},
                      {"iterations", 100}},
                 json{{"stability", 2.0}}, validate_shift_growth, run_shift_growth});
  out.push_back({"partial-paraproduct-growth",
                 "Partial paraproducts with normalized random symbols against min(i1, i2) + 1 in both axis orders.",
                 json{{"level", 3},
                      {"d", 2},
                      {"lattice_exponent", 2.0},
                      {"orders", {{0, 1}, {1, 0}}},
                      {"exponent_pairs", {{3.0, 1.5}, {1.5, 3.0}}},
                      {"depths", {0, 1, 2}},
                      {"symbols", {8, 16}},
                      {"band", -1},
                      {"density", 1.0},
                      {"restarts", 3},
                      {"iterations", 80}},
                 json{{"stability", 2.0}}, validate_partial, run_partial});
  const json tri_params{{"level", 2},     {"d", 1},          {"lattice_exponent", 2.0},
                        {"exponents", {1.5, 2.0, 3.0}},     {"depths", {0, 1}},
                        {"symbols", {4, 8}},                {"density", 1.0},
                        {"restarts", 3},  {"iterations", 60}};
  json t1 = tri_params;
  t1["flavors"] = {0, 1};
  out.push_back({"tri-partial-type1",
                 "Tri-parameter partial paraproducts with a bi-parameter paraproduct inside, all axis orders.", t1,
                 json{{"stability", 2.0}}, [](const Params& p, const Params& t) { validate_tri(p, t, true); },
                 [](const SuiteConfig& c, const Params& p, const Params& t, SuiteReport& r) { run_tri(c, p, t, r, true); }});
  out.push_back({"tri-partial-type2",
                 "Tri-parameter partial paraproducts with shifts in two parameters, all axis orders.", tri_params,
                 json{{"stability", 2.0}}, [](const Params& p, const Params& t) { validate_tri(p, t, false); },
                 [](const SuiteConfig& c, const Params& p, const Params& t, SuiteReport& r) { run_tri(c, p, t, r, false); }});
}

}  // namespace dyadshift::bench
