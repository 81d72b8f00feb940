#include <algorithm>
#include <cmath>

#include "dyadshift/generators.hpp"
#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"
#include "suites.hpp"

namespace dyadshift::bench {

using nlohmann::json;

namespace {

// Deviation relative to the larger of the outputs and the input, so vanishing outputs do
// not turn rounding noise into a large relative error.
double rel_dev(const DiscreteField& a, const DiscreteField& b, const DiscreteField& input) {
  const double scale = std::max({max_abs(a), max_abs(b), max_abs(input)});
  const double dev = max_abs_diff(a, b);
  return scale > 0.0 ? dev / scale : dev;
}

// ---------------------------------------------------------------- haar-calculus

struct HaarCase {
  int axes, dim, level, d;
};

std::vector<HaarCase> haar_cases(const Params& p) {
  std::vector<HaarCase> out;
  for (const auto& c : p.integer_lists("cases")) {
    if (c.size() != 4) throw ConfigError("haar-calculus cases are [axes, dim, level, d]");
    const HaarCase h{c[0], c[1], c[2], c[3]};
    if (h.axes < 1 || h.axes > 3 || h.dim < 1 || h.dim > 2 || h.level < 1 || h.level > 5 || h.d < 1 || h.d > 4)
      throw ConfigError("haar-calculus case out of range (axes <= 3, dim <= 2, level <= 5, d <= 4)");
    const double entries = std::pow(2.0, h.axes * h.dim * h.level) * h.d;
    if (entries > 65536) throw ConfigError("haar-calculus case too large");
    out.push_back(h);
  }
  if (out.empty()) throw ConfigError("haar-calculus needs at least one case");
  return out;
}

// Gram matrix of the normalized constant and all Haar functions on one axis, minus identity.
double orthonormality_dev(const GridAxis& ax) {
  struct Fn {
    CellRange r;
    std::vector<double> v;
  };
  std::vector<Fn> fns;
  fns.push_back({cube_cells(ax, {ax.id, 0, {0, 0, 0}}), std::vector<double>(ax.cells(), 1.0)});
  for (const auto& h : all_haar(ax)) fns.push_back({cube_cells(ax, h.cube), haar_profile(ax, h)});
  double dev = 0.0;
  for (std::size_t a = 0; a < fns.size(); ++a)
    for (std::size_t b = a; b < fns.size(); ++b) {
      const std::size_t lo = std::max(fns[a].r.begin, fns[b].r.begin);
      const std::size_t hi = std::min(fns[a].r.end(), fns[b].r.end());
      double s = 0.0;
      for (std::size_t c = lo; c < hi; ++c) s += fns[a].v[c - fns[a].r.begin] * fns[b].v[c - fns[b].r.begin];
      s *= ax.cell_measure();
      dev = std::max(dev, std::fabs(s - (a == b ? 1.0 : 0.0)));
    }
  return dev;
}

void run_haar(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  const double tol = t.real("tolerance");
  rep.columns = {"axes", "dim", "L", "d", "check", "max_abs_dev", "pass"};
  const auto cases = haar_cases(p);
  double worst = 0.0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& c = cases[ci];
    std::vector<GridAxis> axes;
    for (int a = 0; a < c.axes; ++a) axes.emplace_back(a, c.dim, c.level);
    Rng rng(derive_seed(cfg.seed, ci));
    const DiscreteField f = random_field(axes, LatticeSpec::flat(c.d, 2.0), rng);
    std::vector<std::pair<std::string, double>> checks;
    checks.emplace_back("orthonormality", orthonormality_dev(axes[0]));
    double expansion = 0.0, reconstruction = 0.0, telescoping = 0.0, differences = 0.0;
    for (const auto& ax : axes) {
      const DiscreteField e0 = conditional_expectation(f, ax.id, 0);
      DiscreteField hx = e0, md = e0, ld = e0;
      for (const auto& h : all_haar(ax))
        add_insert(hx, ax.id, cube_cells(ax, h.cube), haar_profile(ax, h), haar_pairing(f, h));
      for (const auto& q : all_cubes(ax, 0, ax.level - 1)) md += martingale_difference(f, q);
      for (int m = 0; m < ax.level; ++m) {
        const DiscreteField step = level_difference(f, ax.id, m);
        ld += step;
        differences = std::max(differences, max_abs_diff(step, conditional_expectation(f, ax.id, m + 1) -
                                                                   conditional_expectation(f, ax.id, m)));
      }
      expansion = std::max(expansion, max_abs_diff(hx, f));
      reconstruction = std::max(reconstruction, max_abs_diff(md, f));
      telescoping = std::max({telescoping, max_abs_diff(ld, f),
                              max_abs_diff(conditional_expectation(f, ax.id, ax.level), f)});
    }
    checks.emplace_back("haar_expansion", expansion);
    checks.emplace_back("martingale_reconstruction", reconstruction);
    checks.emplace_back("telescoping", telescoping);
    checks.emplace_back("level_difference", differences);

    const GridAxis& a0 = axes[0];
    const DiscreteField e0 = conditional_expectation(f, a0.id, 0);
    double energy = inner_product(e0, e0);
    for (const auto& q : all_cubes(a0, 0, a0.level - 1)) {
      const DiscreteField dq = martingale_difference(f, q);
      energy += inner_product(dq, dq);
    }
    checks.emplace_back("parseval", std::fabs(energy - inner_product(f, f)) / inner_product(f, f));

    double blocks = 0.0;
    for (const auto& k : all_cubes(a0, 0, a0.level - 1))
      for (int i = 0; k.level + i <= a0.level - 1; ++i) {
        DiscreteField sum = f.zeros_like();
        for (const auto& q : descendants(a0, k, i)) sum += martingale_difference(f, q);
        blocks = std::max(blocks, max_abs_diff(martingale_block(f, k, i), sum));
      }
    checks.emplace_back("block", blocks);

    if (c.axes >= 2) {
      double bi = 0.0;
      for (int trial = 0; trial < 8; ++trial) {
        const int i = static_cast<int>(rng.below(static_cast<std::size_t>(c.level)));
        const int j = static_cast<int>(rng.below(static_cast<std::size_t>(c.level)));
        const auto ks = all_cubes(axes[0], 0, c.level - 1 - i);
        const auto vs = all_cubes(axes[1], 0, c.level - 1 - j);
        const DyadicCube k = ks[rng.below(ks.size())], v = vs[rng.below(vs.size())];
        bi = std::max(bi, max_abs_diff(biparam_block(f, k, v, i, j), martingale_block(martingale_block(f, k, i), v, j)));
      }
      checks.emplace_back("biparameter_block", bi);
    }
    for (const auto& [name, dev] : checks) {
      const bool ok = dev <= tol;
      worst = std::max(worst, dev);
      rep.add_row({cell(c.axes), cell(c.dim), cell(c.level), cell(c.d), name, cell(dev), cell(ok)});
      if (!ok) rep.fail(name + " deviation " + cell(dev) + " in case " + fmt_key({c.axes, c.dim, c.level, c.d}));
    }
  }
  rep.metrics["max_abs_dev"] = worst;
}

// ---------------------------------------------------------------- nested-shift-identity

void validate_nested(const Params& p, const Params& t) {
  const int level = p.integer_in("level", 1, 5);
  p.integer_in("dim", 1, 2);
  p.integer_in("d", 1, 4);
  p.integer_in("pairs", 1, 100000);
  p.integer_in("max_piece_depth", -1, 5);
  check_depths(p.integers("depths"), level, "nested-shift-identity");
  if (p.integers("depths").empty()) throw ConfigError("nested-shift-identity needs depths");
  if (std::pow(2.0, 2 * level * p.integer("dim")) > 4096) throw ConfigError("nested-shift-identity grid too large");
  t.real_in("relative_tolerance", 0.0, 1.0);
}

void run_nested(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  const int level = p.integer("level"), dim = p.integer("dim"), d = p.integer("d"), pairs = p.integer("pairs");
  const double tol = t.real("relative_tolerance");
  const auto depths = p.integers("depths");
  KernelDraw draw;
  draw.unit_norm = false;
  draw.max_piece_depth = p.integer("max_piece_depth");
  const GridAxis a1(0, dim, level), a2(1, dim, level);
  const LatticeSpec lat = LatticeSpec::flat(d, 2.0);
  rep.columns = {"i1", "i2", "j1", "j2", "L", "seed", "max_abs_dev", "max_rel_dev", "pass"};
  double worst = 0.0;
  std::uint64_t tuple = 0;
  for (int i1 : depths)
    for (int i2 : depths)
      for (int j1 : depths)
        for (int j2 : depths) {
          double abs_dev = 0.0, rel = 0.0;
          for (int k = 0; k < pairs; ++k) {
            const std::uint64_t s = derive_seed(cfg.seed, tuple, static_cast<std::uint64_t>(k));
            const ShiftSpec2P spec = random_shift_2p(a1, a2, d, {i1, i2, j1, j2}, s, draw);
            Rng rng(derive_seed(s, 1));
            const DiscreteField f = random_field({a1, a2}, lat, rng);
            const DiscreteField direct = apply_shift_2p(spec, f);
            const DiscreteField nested = nest_biparameter(spec, f);
            const DiscreteField compiled = CompiledShift2P(spec).apply(f);
            abs_dev = std::max({abs_dev, max_abs_diff(direct, nested), max_abs_diff(direct, compiled)});
            rel = std::max({rel, rel_dev(direct, nested, f), rel_dev(direct, compiled, f)});
          }
          const bool ok = rel <= tol;
          worst = std::max(worst, rel);
          rep.add_row({cell(i1), cell(i2), cell(j1), cell(j2), cell(level), cell(cfg.seed), cell(abs_dev), cell(rel),
                       cell(ok)});
          if (!ok) rep.fail("nested evaluation differs at " + fmt_key({i1, i2, j1, j2}) + ": " + cell(rel));
          ++tuple;
        }
  rep.metrics["max_rel_dev"] = worst;
}

// ---------------------------------------------------------------- model-reduction

void validate_model(const Params& p, const Params& t) {
  const int level = p.integer_in("level", 1, 8);
  const int dim = p.integer_in("dim", 1, 2);
  p.integer_in("d", 1, 4);
  p.integer_in("models", 1, 100000);
  p.real_in("density", 0.0, 1.0);
  check_depths({p.integer("max_depth")}, level, "model-reduction");
  if (level * dim > 10) throw ConfigError("model-reduction grid too large");
  t.real_in("tolerance", 0.0, 1.0);
}

void run_model(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  const GridAxis ax(0, p.integer("dim"), p.integer("level"));
  const int d = p.integer("d"), max_depth = p.integer("max_depth");
  const double tol = t.real("tolerance");
  rep.columns = {"model", "L", "i1", "i2", "d", "entries", "max_abs_dev", "pass"};
  double worst = 0.0;
  for (int m = 0; m < p.integer("models"); ++m) {
    const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(m));
    Rng rng(s);
    const int i1 = static_cast<int>(rng.below(static_cast<std::size_t>(max_depth) + 1));
    const int i2 = static_cast<int>(rng.below(static_cast<std::size_t>(max_depth) + 1));
    const ModelOperatorSpec model = random_model(ax, i1, i2, d, derive_seed(s, 1), p.real("density"));
    const DiscreteField f = random_field({ax}, LatticeSpec::flat(d, 2.0), rng);
    const DiscreteField a = apply_model(model, f);
    const DiscreteField b = apply_shift_1p(model_to_shift(model, d), f);
    const double dev = max_abs_diff(a, b) / std::max(1.0, max_abs(a));
    const bool ok = dev <= tol;
    worst = std::max(worst, dev);
    rep.add_row({cell(m), cell(ax.level), cell(i1), cell(i2), cell(d), cell(model.entries.size()), cell(dev), cell(ok)});
    if (!ok) rep.fail("model " + std::to_string(m) + " deviates by " + cell(dev));
  }
  rep.metrics["max_abs_dev"] = worst;
}

// ---------------------------------------------------------------- l2-contraction

void validate_contraction(const Params& p, const Params& t) {
  const int level = p.integer_in("level", 1, 12);
  if (level > 12) throw ConfigError("l2-contraction grid too large");
  check_depths({p.integer("max_depth")}, level, "l2-contraction");
  p.integer_in("draws", 1, 100000);
  p.integer_in("max_piece_depth", -1, 12);
  t.real_in("tolerance", 0.0, 1.0);
}

void run_contraction(const SuiteConfig& cfg, const Params& p, const Params& t, SuiteReport& rep) {
  const GridAxis ax(0, 1, p.integer("level"));
  const int max_depth = p.integer("max_depth"), draws = p.integer("draws");
  const double tol = t.real("tolerance");
  const auto l2 = MixedNormSpec::uniform({0}, 2.0, LatticeSpec::scalar());
  KernelDraw draw;
  draw.unit_norm = false;
  draw.max_piece_depth = p.integer("max_piece_depth");
  rep.columns = {"i1", "i2", "L", "draws", "max_kernel_sup", "max_norm", "pass"};
  double worst = 0.0;
  std::uint64_t tuple = 0;
  for (int i1 = 0; i1 <= max_depth; ++i1)
    for (int i2 = 0; i2 <= max_depth; ++i2, ++tuple) {
      double max_norm = 0.0, max_sup = 0.0;
      for (int k = 0; k < draws; ++k) {
        const ShiftSpec1P spec =
            random_shift_1p(ax, 1, i1, i2, derive_seed(cfg.seed, tuple, static_cast<std::uint64_t>(k)), draw);
        for (const auto& [q, kb] : spec.kernels.blocks) max_sup = std::max(max_sup, kb.sup_norm());
        const auto rep_norm = operator_norm(shift_map(spec, LatticeSpec::scalar()), l2, l2, NormMethod::exact_svd);
        max_norm = std::max(max_norm, rep_norm.estimate);
      }
      const bool ok = max_norm <= 1.0 + tol && max_sup <= 1.0;
      worst = std::max(worst, max_norm);
      rep.add_row({cell(i1), cell(i2), cell(ax.level), cell(draws), cell(max_sup), cell(max_norm), cell(ok)});
      if (!ok) rep.fail("shift norm " + cell(max_norm) + " exceeds 1 at " + fmt_key({i1, i2}));
    }
  rep.metrics["max_norm"] = worst;
}

}  // namespace

void add_exact_suites(std::vector<SuiteDef>& out) {
  out.push_back({"haar-calculus",
                 "Orthonormality, Haar and martingale reconstruction, telescoping and block identities.",
                 json{{"cases", json::array({json::array({1, 1, 5, 4}), json::array({1, 2, 4, 2}),
                                             json::array({2, 1, 5, 1}), json::array({2, 2, 3, 2}),
                                             json::array({3, 1, 4, 1}), json::array({3, 2, 2, 3}),
                                             json::array({2, 1, 3, 4})})}},
                 json{{"tolerance", 1e-12}},
                 [](const Params& p, const Params& t) {
                   haar_cases(p);
                   t.real_in("tolerance", 0.0, 1.0);
                 },
                 run_haar});
  out.push_back({"nested-shift-identity",
                 "Two-parameter shifts: direct sum against the nested one-parameter evaluation and the compiled form.",
                 json{{"level", 3}, {"dim", 1}, {"d", 2}, {"pairs", 100}, {"depths", {0, 1, 2}}, {"max_piece_depth", -1}},
                 json{{"relative_tolerance", 1e-11}}, validate_nested, run_nested});
  out.push_back({"model-reduction", "Model operators against their shift representation.",
                 json{{"level", 4}, {"dim", 1}, {"d", 2}, {"models", 100}, {"max_depth", 2}, {"density", 0.5}},
                 json{{"tolerance", 1e-12}}, validate_model, run_model});
  out.push_back({"l2-contraction", "Exact L2 norms of scalar one-parameter shifts with kernels bounded by 1.",
                 json{{"level", 6}, {"max_depth", 3}, {"draws", 50}, {"max_piece_depth", -1}},
                 json{{"tolerance", 1e-9}}, validate_contraction, run_contraction});
}

}  // namespace dyadshift::bench
