#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadshift/generators.hpp"
#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"
#include "dyadshift/paraproduct.hpp"
#include "dyadshift/randomized.hpp"
#include "dyadshift/stopping.hpp"
#include "suites.hpp"

namespace dyadshift::bench {

using nlohmann::json;

namespace {

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void check_band(SuiteReport& rep, const std::string& name, const std::vector<double>& bands, double factor) {
  const auto [lo, hi] = std::minmax_element(bands.begin(), bands.end());
  const double spread = *lo > 0.0 ? *hi / *lo : INFINITY;
  rep.metrics[name + "_spread"] = spread;
  if (!(spread <= factor)) rep.fail(name + ": band constants vary by " + cell(spread));
}

// ---------------------------------------------------------------- paraproduct-rbound-*

enum class RKind { one_parameter, full, mixed };

void validate_rbound(const Params& p, const Params& t, RKind kind) {
  const int level = p.integer_in("level", 1, kind == RKind::one_parameter ? 10 : 5);
  (void)level;
  p.integer_in("d", 1, 4);
  for (double x : p.reals("exponents")) check_exponent(x, "p");
  for (double x : p.reals("lattice_exponents")) check_exponent(x, "r");
  const auto sizes = p.integers("sizes");
  if (sizes.size() < 2 || !std::is_sorted(sizes.begin(), sizes.end()) || sizes.front() < 1)
    throw ConfigError("family sizes must be an increasing ladder");
  for (int n : p.integers("rbound_sizes"))
    if (n < 1 || n > 16) throw ConfigError("random-sum sizes must lie in [1, 16]");
  p.integer_in("restarts", 1, 100);
  p.integer_in("iterations", 0, 10000);
  p.integer_in("swap_trials", 0, 10000);
  p.integer_in("member_restarts", 1, 100);
  p.integer_in("member_iterations", 1, 10000);
  p.real_in("density", 0.0, 1.0);
  t.real_in("growth", 1.0, 1e6);
}

void run_rbound(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep, RKind kind) {
  rep.columns = {"p", "r", "size", "estimate", "best_single", "n_max", "evaluations", "dual_value", "certified"};
  const int level = p.integer("level"), d = p.integer("d");
  const GridAxis a0(0, 1, level), a1(1, 1, level);
  const auto sizes = p.integers("sizes");
  SymbolDraw draw;
  draw.density = p.real("density");
  std::vector<Symbol1P> s1;
  std::vector<Symbol2P> s2;
  for (int k = 0; k < sizes.back(); ++k) {
    const std::uint64_t s = derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(k));
    if (kind == RKind::one_parameter)
      s1.push_back(random_symbol_1p(a0, 1.0, s, draw));
    else
      s2.push_back(random_symbol_2p(a0, a1, 1.0, s, draw));
  }
  RBoundOptions opts;
  opts.sizes = p.integers("rbound_sizes");
  opts.restarts = p.integer("restarts");
  opts.iterations = p.integer("iterations");
  opts.swap_trials = p.integer("swap_trials");
  opts.member_norms = NormOptions{p.integer("member_restarts"), p.integer("member_iterations"), 1e-9, 1};
  const std::vector<int> axis_ids = kind == RKind::one_parameter ? std::vector<int>{0} : std::vector<int>{0, 1};
  for (double pe : p.reals("exponents"))
    for (double r : p.reals("lattice_exponents")) {
      const LatticeSpec lat = LatticeSpec::flat(d, r);
      const MixedNormSpec spec = MixedNormSpec::uniform(axis_ids, pe, lat);
      std::vector<LinearMap> maps;
      for (int k = 0; k < sizes.back(); ++k)
        maps.push_back(kind == RKind::one_parameter ? pi_map(s1[k], lat)
                       : kind == RKind::full        ? pi_full_map(s2[k], lat)
                                                    : pi_mixed_map(s2[k], lat));
      opts.seed = derive_seed(cfg.seed, 1);
      std::vector<RBoundReport> reports;
      for (int n : sizes) {
        const std::vector<LinearMap> fam(maps.begin(), maps.begin() + n);
        reports.push_back(r_bound_estimate(fam, spec, opts, reports.empty() ? nullptr : &reports.back()));
        const auto& rb = reports.back();
        rep.add_row({cell(pe), cell(r), cell(n), cell(rb.estimate), cell(rb.best_single), cell(rb.n_max),
                     cell(rb.evaluations), cell(rb.dual_value), cell(rb.duality_certified)});
      }
      const std::string tag = "p" + num(pe) + "_r" + num(r);
      const double growth = reports.back().estimate / reports.front().estimate;
      rep.metrics[tag + "_growth"] = growth;
      rep.metrics[tag + "_estimate"] = reports.back().estimate;
      for (std::size_t k = 1; k < reports.size(); ++k)
        if (reports[k].estimate < reports[k - 1].estimate)
          rep.fail(tag + ": estimate decreased when the family grew");
      if (!(growth < t.real("growth"))) rep.fail(tag + ": R-bound grows by " + cell(growth));
    }
}

// ---------------------------------------------------------------- decoupling

void validate_decoupling(const Params& p, const Params& t) {
  const auto levels = p.integers("levels");
  if (levels.empty()) throw ConfigError("decoupling needs levels");
  for (int l : levels)
    if (l < 1 || l > 8) throw ConfigError("decoupling level out of range");
  const int lmin = *std::min_element(levels.begin(), levels.end());
  for (const auto& ij : p.integer_lists("depths")) {
    if (ij.size() != 2 || ij[1] < 0 || ij[1] > ij[0]) throw ConfigError("decoupling depths are [i, j] with j <= i");
    check_depths({ij[0]}, lmin, "decoupling");
  }
  p.integer_in("draws", 1, 100000);
  p.integer_in("d", 1, 8);
  check_exponent(p.real("lattice_exponent"), "lattice exponent");
  for (double x : p.reals("exponents")) check_exponent(x, "p");
  const std::string mode = p.text("mode");
  if (mode != "automatic" && mode != "exact" && mode != "monte_carlo") throw ConfigError("unknown expectation mode");
  p.integer_in("mc_trials", 2, 10000000);
  t.real_in("haar_tolerance", 0.0, 1.0);
  t.real_in("stability", 1.0, 1e6);
}

void run_decoupling(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"L", "p", "i", "j", "draws", "haar_ratio", "min_ratio", "max_ratio", "band"};
  const int d = p.integer("d"), draws = p.integer("draws"), trials = p.integer("mc_trials");
  const LatticeSpec lat = LatticeSpec::flat(d, p.real("lattice_exponent"));
  const std::string ms = p.text("mode");
  const ExpectationMode mode = ms == "exact" ? ExpectationMode::exact
                               : ms == "monte_carlo" ? ExpectationMode::monte_carlo
                                                     : ExpectationMode::automatic;
  std::vector<double> lattice_vec(d);
  for (int k = 0; k < d; ++k) lattice_vec[k] = 1.0 / (k + 1);
  for (double pe : p.reals("exponents"))
    for (const auto& ij : p.integer_lists("depths")) {
      const int i = ij[0], j = ij[1];
      std::vector<double> bands;
      for (int level : p.integers("levels")) {
        const GridAxis ax(0, 1, level);
        // Haar function seen by the block of the coarsest active cube.
        const DyadicCube v = decoupling_subgrid(ax, i, j).front();
        const DyadicCube leaf = descendants(ax, v, i).back();
        const DiscreteField h = haar_function(ax, {leaf, 1});
        DiscreteField hv({ax}, lat);
        for (std::size_t c = 0; c < ax.cells(); ++c)
          for (int k = 0; k < d; ++k) hv[c * d + k] = h[c] * lattice_vec[k];
        const double haar_ratio = decoupling_ratio(hv, i, j, pe, ExpectationMode::exact).ratio;
        if (!(std::fabs(haar_ratio - 1.0) <= t.real("haar_tolerance")))
          rep.fail("single Haar ratio " + cell(haar_ratio) + " at L=" + std::to_string(level));
        double lo = INFINITY, hi = 0.0;
        for (int k = 0; k < draws; ++k) {
          const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(level * 100 + i * 10 + j),
                                              static_cast<std::uint64_t>(k));
          Rng rng(s);
          const DiscreteField f = random_field({ax}, lat, rng);
          const double ratio = decoupling_ratio(f, i, j, pe, mode, static_cast<std::size_t>(trials), s).ratio;
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
        const double band = std::max(hi, 1.0 / lo);
        bands.push_back(band);
        rep.add_row({cell(level), cell(pe), cell(i), cell(j), cell(draws), cell(haar_ratio), cell(lo), cell(hi),
                     cell(band)});
        rep.metrics["p" + num(pe) + "_i" + std::to_string(i) + "_j" + std::to_string(j) + "_L" +
                    std::to_string(level) + "_band"] = band;
      }
      check_band(rep, "p" + num(pe) + "_i" + std::to_string(i) + "_j" + std::to_string(j), bands, t.real("stability"));
    }
}

// ---------------------------------------------------------------- stopping-sparse

void validate_stopping(const Params& p, const Params& t) {
  const int level = p.integer_in("level", 1, 12);
  const int dim = p.integer_in("dim", 1, 2);
  if (level * dim > 12) throw ConfigError("stopping-sparse grid too large");
  p.integer_in("trials", 1, 1000000);
  p.real_in("threshold", 1.0, 1e6);
  p.real_in("spread", 0.0, 20.0);
  t.real_in("block_bound", 0.0, 1e6);
  t.real_in("sparse_fraction", 0.0, 1.0);
  t.real_in("tolerance", 0.0, 1.0);
}

double max_packing(const StoppingFamily& fam) {
  double worst = 0.0;
  for (const auto& gen : fam.generations)
    for (const auto& j : gen) {
      double m = 0.0;
      for (const auto& q : fam.children_of(j)) m += cube_measure(fam.axis, q);
      worst = std::max(worst, m / cube_measure(fam.axis, j));
    }
  return worst;
}

void run_stopping(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"trial",          "generations_b",  "generations_f",   "generations_combined",
                 "max_packing_b",  "max_packing_f",  "min_sparse_ratio", "max_block_sup",
                 "max_telescoping_dev", "pass"};
  const GridAxis ax(0, p.integer("dim"), p.integer("level"));
  const DyadicCube root{0, 0, {0, 0, 0}};
  const double thr = p.real("threshold"), bound = t.real("block_bound"), frac = t.real("sparse_fraction"),
               tol = t.real("tolerance");
  double worst_sup = 0.0, worst_pack = 0.0, worst_tel = 0.0, worst_sparse = 1.0;
  for (int k = 0; k < p.integer("trials"); ++k) {
    const DiscreteField b = random_bmo_function(ax, derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(k)));
    const DiscreteField f =
        random_weight({ax}, derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(k)), p.real("spread"));
    const StoppingFamily fb = stopping_cubes_b(b, root, thr);
    const StoppingFamily ff = principal_cubes(f, root, thr);
    const StoppingFamily fc = combined_stopping(b, f, root, thr);
    const double pb = max_packing(fb), pf = max_packing(ff);
    const SparseReport sparse = verify_sparse(fc, frac);
    double sup = 0.0, tel = 0.0;
    for (const auto& gen : fb.generations)
      for (const auto& j : gen) {
        const DiscreteField block = stopping_block(b, fb, j);
        sup = std::max(sup, max_abs(block));
        std::vector<char> stopped(ax.cells(), 0);
        for (const auto& c : fb.children_of(j)) {
          const CellRange r = cube_cells(ax, c);
          std::fill(stopped.begin() + static_cast<long>(r.begin), stopped.begin() + static_cast<long>(r.end()), 1);
        }
        const double mean = cube_average(b, j)[0];
        const CellRange rj = cube_cells(ax, j);
        for (std::size_t c = rj.begin; c < rj.end(); ++c)
          if (!stopped[c]) tel = std::max(tel, std::fabs(block[c] - (b[c] - mean)));
      }
    const bool ok = pb <= 0.25 && pf <= 0.25 && sparse.sparse && sup <= bound && tel <= tol && fb.warnings.empty();
    worst_sup = std::max(worst_sup, sup);
    worst_pack = std::max({worst_pack, pb, pf});
    worst_tel = std::max(worst_tel, tel);
    worst_sparse = std::min(worst_sparse, sparse.min_ratio);
    rep.add_row({cell(k), cell(fb.generations.size()), cell(ff.generations.size()), cell(fc.generations.size()),
                 cell(pb), cell(pf), cell(sparse.min_ratio), cell(sup), cell(tel), cell(ok)});
    if (!ok) rep.fail("trial " + std::to_string(k) + " violates a stopping-time property");
  }
  rep.metrics["max_block_sup"] = worst_sup;
  rep.metrics["max_packing"] = worst_pack;
  rep.metrics["max_telescoping_dev"] = worst_tel;
  rep.metrics["min_sparse_ratio"] = worst_sparse;
}

// ---------------------------------------------------------------- key-estimate

void validate_key(const Params& p, const Params& t) {
  const auto levels = p.integers("levels");
  if (levels.empty()) throw ConfigError("key-estimate needs levels");
  for (int l : levels)
    if (l < 1 || l > 5) throw ConfigError("key-estimate level out of range");
  p.integer_in("draws", 1, 100000);
  p.integer_in("singles", 0, 100000);
  p.real_in("density", 0.0, 1.0);
  t.real_in("single_tolerance", 0.0, 1.0);
  t.real_in("stability", 1.0, 1e6);
}

void run_key(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"L", "kind", "draw", "lhs", "bmo", "square_l1", "ratio"};
  SymbolDraw draw;
  draw.density = p.real("density");
  std::vector<double> maxima;
  for (int level : p.integers("levels")) {
    const GridAxis a0(0, 1, level), a1(1, 1, level);
    const auto h0 = all_haar(a0), h1 = all_haar(a1);
    Rng rng(derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(level)));
    for (int k = 0; k < p.integer("singles"); ++k) {
      const HaarIndex i = h0[rng.below(h0.size())], j = h1[rng.below(h1.size())];
      Symbol2P lambda{a0, a1, {}}, a{a0, a1, {}};
      lambda.add(i, j, rng.uniform(-2.0, 2.0));
      a.add(i, j, rng.uniform(-2.0, 2.0));
      const KeyEstimate e = key_estimate_ratio(lambda, a);
      rep.add_row({cell(level), "single", cell(k), cell(e.lhs), cell(e.bmo), cell(e.square_l1), cell(e.ratio)});
      if (!(std::fabs(e.ratio - 1.0) <= t.real("single_tolerance")))
        rep.fail("single-coefficient ratio " + cell(e.ratio) + " at L=" + std::to_string(level));
    }
    double worst = 0.0;
    for (int k = 0; k < p.integer("draws"); ++k) {
      const std::uint64_t s = derive_seed(cfg.seed, 1 + static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(k));
      const Symbol2P lambda = random_symbol_2p(a0, a1, 1.0, derive_seed(s, 0), draw);
      // A lives on the support of lambda; off that support it does not enter the pairing.
      Symbol2P a = lambda;
      Rng arng(derive_seed(s, 1));
      for (auto& [key, c] : a.coefficients) c = arng.uniform(-1.0, 1.0);
      const KeyEstimate e = key_estimate_ratio(lambda, a);
      rep.add_row({cell(level), "random", cell(k), cell(e.lhs), cell(e.bmo), cell(e.square_l1), cell(e.ratio)});
      if (e.degenerate || !std::isfinite(e.ratio)) rep.fail("degenerate key estimate at draw " + std::to_string(k));
      worst = std::max(worst, e.ratio);
    }
    rep.metrics["L" + std::to_string(level) + "_max_ratio"] = worst;
    maxima.push_back(worst);
  }
  check_band(rep, "max_ratio", maxima, t.real("stability"));
}

// ---------------------------------------------------------------- khintchine-maurey

void validate_km(const Params& p, const Params& t) {
  p.integer_in("d", 1, 64);
  p.integer_in("terms", 1, 16);
  p.integer_in("draws", 1, 1000000);
  p.integer_in("hilbert_draws", 1, 1000000);
  for (double r : p.reals("lattice_exponents")) check_exponent(r, "r");
  t.real_in("hilbert_tolerance", 0.0, 1.0);
  const double lo = t.real_in("band_low", 0.0, 1.0), hi = t.real_in("band_high", 1.0, 1e6);
  (void)lo;
  (void)hi;
}

std::vector<std::vector<double>> km_vectors(Rng& rng, int terms, int d) {
  const std::size_t n = 1 + rng.below(static_cast<std::size_t>(terms));
  const bool heavy = rng.below(2) == 1;
  std::vector<std::vector<double>> e(n, std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& v : e)
    for (double& x : v) {
      const double g = rng.normal();
      x = heavy ? g * g * g : g;
    }
  return e;
}

void run_km(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"r", "draws", "min_ratio", "max_ratio", "pass"};
  const int d = p.integer("d"), terms = p.integer("terms");
  auto sweep = [&](double r, int draws, std::uint64_t stream, bool hilbert) {
    Rng rng(derive_seed(cfg.seed, stream));
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k < draws; ++k) {
      const double ratio = khintchine_maurey_ratio(km_vectors(rng, terms, d), LatticeSpec::flat(d, r));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    const bool ok = hilbert ? std::max(hi - 1.0, 1.0 - lo) <= t.real("hilbert_tolerance")
                            : lo >= t.real("band_low") && hi <= t.real("band_high");
    rep.add_row({cell(r), cell(draws), cell(lo), cell(hi), cell(ok)});
    rep.metrics["r" + num(r) + "_min"] = lo;
    rep.metrics["r" + num(r) + "_max"] = hi;
    if (!ok) rep.fail("Khintchine-Maurey ratios for r=" + num(r) + " in [" + cell(lo) + ", " + cell(hi) + "]");
  };
  sweep(2.0, p.integer("hilbert_draws"), 0, true);
  std::uint64_t stream = 1;
  for (double r : p.reals("lattice_exponents")) sweep(r, p.integer("draws"), stream++, false);
}

// ---------------------------------------------------------------- fefferman-stein

void validate_fs(const Params& p, const Params& t) {
  p.integer_in("level", 1, 6);
  p.integer_in("members", 1, 64);
  p.integer_in("families", 1, 1000000);
  p.real_in("spread", 0.0, 20.0);
  for (const auto& e : p.real_lists("exponents")) {
    if (e.size() != 2) throw ConfigError("fefferman-stein exponents are [p, r]");
    check_exponent(e[0], "p");
    check_exponent(e[1], "r");
  }
  t.real_in("cap", 1.0, 1e9);
}

void run_fs(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  rep.columns = {"kind", "p", "r", "families", "min_ratio", "max_ratio", "pass"};
  const int level = p.integer("level"), members = p.integer("members"), families = p.integer("families");
  const GridAxis a0(0, 1, level), a1(1, 1, level);
  std::uint64_t stream = 0;
  for (const MaximalKind kind : {MaximalKind::one_parameter, MaximalKind::strong})
    for (const auto& e : p.real_lists("exponents")) {
      const MixedNormSpec spec = MixedNormSpec::uniform({0, 1}, e[0], LatticeSpec::scalar());
      double lo = INFINITY, hi = 0.0;
      for (int k = 0; k < families; ++k) {
        std::vector<DiscreteField> fs;
        for (int m = 0; m < members; ++m)
          fs.push_back(random_weight({a0, a1}, derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(k * members + m)),
                                     p.real("spread")));
        const double ratio = fefferman_stein_ratio(fs, e[1], spec, kind);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      ++stream;
      const std::string name = kind == MaximalKind::strong ? "strong" : "one_parameter";
      const bool ok = lo >= 1.0 - 1e-12 && hi <= t.real("cap");
      rep.add_row({name, cell(e[0]), cell(e[1]), cell(families), cell(lo), cell(hi), cell(ok)});
      rep.metrics[name + "_p" + num(e[0]) + "_r" + num(e[1]) + "_max"] = hi;
      if (!ok) rep.fail(name + " Fefferman-Stein ratios in [" + cell(lo) + ", " + cell(hi) + "]");
    }
}

}  // namespace

void add_random_suites(std::vector<SuiteDef>& out) {
  const json rb_params{{"level", 4},
                       {"d", 2},
                       {"exponents", {1.5, 2.0, 3.0}},
                       {"lattice_exponents", {1.5, 2.0, 3.0}},
                       {"sizes", {4, 16, 64}},
                       {"rbound_sizes", {1, 2, 4, 8}},
                       {"restarts", 2},
                       {"iterations", 30},
                       {"swap_trials", 8},
                       {"member_restarts", 3},
                       {"member_iterations", 100},
                       {"density", 1.0}};
  const std::pair<RKind, const char*> kinds[] = {
      {RKind::one_parameter, "paraproduct-rbound-1p"},
      {RKind::full, "paraproduct-rbound-full"},
      {RKind::mixed, "paraproduct-rbound-mixed"}};
  for (const auto& [kind, name] : kinds) {
    json params = rb_params;
    const RKind k = kind;
    out.push_back({name, "R-bound estimates of nested families of normalized paraproducts.", params,
                   json{{"growth", 2.0}}, [k](const Params& p, const Params& t) { validate_rbound(p, t, k); },
                   [k](const SuiteConfig& c, const Params& p, const Params& t, SuiteReport& r) {
                     run_rbound(c, p, t, r, k);
                   }});
  }
  out.push_back({"decoupling", "Ratio of the original and decoupled martingale-block sums.",
                 json{{"levels", {3, 4}},
                      {"draws", 200},
                      {"exponents", {1.5, 2.0, 3.0}},
                      {"depths", {{0, 0}, {1, 0}, {1, 1}}},
                      {"d", 2},
                      {"lattice_exponent", 1.5},
                      {"mode", "automatic"},
                      {"mc_trials", 2000}},
                 json{{"haar_tolerance", 1e-10}, {"stability", 2.0}}, validate_decoupling, run_decoupling});
  out.push_back({"stopping-sparse", "Stopping cubes, sparseness, packing and martingale-block bounds.",
                 json{{"level", 6}, {"dim", 1}, {"trials", 500}, {"threshold", 4.0}, {"spread", 3.0}},
                 json{{"block_bound", 6.0}, {"sparse_fraction", 0.5}, {"tolerance", 1e-12}}, validate_stopping,
                 run_stopping});
  out.push_back({"key-estimate", "Coefficient pairing against product BMO times the square function.",
                 json{{"levels", {3, 4}}, {"draws", 1000}, {"singles", 20}, {"density", 0.3}},
                 json{{"single_tolerance", 1e-14}, {"stability", 2.0}}, validate_key, run_key});
  out.push_back({"khintchine-maurey", "Random sums in finite lattices against the square function.",
                 json{{"d", 6}, {"terms", 8}, {"draws", 1000}, {"hilbert_draws", 100}, {"lattice_exponents", {1.5, 4.0}}},
                 json{{"hilbert_tolerance", 1e-12}, {"band_low", 0.5}, {"band_high", 2.0}}, validate_km, run_km});
  out.push_back({"fefferman-stein", "Vector-valued maximal function ratios for one-parameter and strong maximal functions.",
                 json{{"level", 3},
                      {"members", 4},
                      {"families", 500},
                      {"spread", 2.0},
                      {"exponents", {{1.5, 2.0}, {3.0, 1.5}, {2.0, 3.0}}}},
                 json{{"cap", 10.0}}, validate_fs, run_fs});
}

}  // namespace dyadshift::bench
