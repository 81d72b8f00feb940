#include "dyadshift/randomized.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dyadshift/haar.hpp"

namespace dyadshift {

// ---------------------------------------------------------------- Rademacher sums

namespace {

void check_vectors(const std::vector<std::vector<double>>& e) {
  for (const auto& v : e)
    if (v.size() != e[0].size()) throw DimensionMismatch("random sum vectors have different sizes");
}

}  // namespace

RademacherResult rademacher_norm(const std::vector<std::vector<double>>& e, const VectorNorm& norm,
                                 std::uint64_t seed, std::size_t mc_samples) {
  RademacherResult res;
  if (e.empty()) return res;
  check_vectors(e);
  const std::size_t n = e.size(), dim = e[0].size();
  std::vector<double> s(dim);
  if (n <= 16) {
    // eps_1 = +1 by symmetry; Gray code over the remaining signs with periodic resync.
    std::vector<int> sign(n, 1);
    const std::size_t patterns = std::size_t{1} << (n - 1);
    auto resync = [&] {
      std::fill(s.begin(), s.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < dim; ++k) s[k] += sign[i] * e[i][k];
    };
    resync();
    double acc = 0.0;
    for (std::size_t t = 0; t < patterns; ++t) {
      if (t > 0) {
        const std::size_t b = static_cast<std::size_t>(std::countr_zero(t)) + 1;
        sign[b] = -sign[b];
        if (t % 64 == 0) {
          resync();
        } else {
          for (std::size_t k = 0; k < dim; ++k) s[k] += 2.0 * sign[b] * e[b][k];
        }
      }
      const double v = norm(s);
      acc += v * v;
    }
    res.value = std::sqrt(acc / static_cast<double>(patterns));
    res.samples = patterns;
    return res;
  }
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t t = 0; t < mc_samples; ++t) {
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int sg = rng.sign();
      for (std::size_t k = 0; k < dim; ++k) s[k] += sg * e[i][k];
    }
    const double v = norm(s);
    const double x = v * v;
    const double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  res.exact = false;
  res.samples = mc_samples;
  res.value = std::sqrt(mean);
  const double se_mean = mc_samples > 1 ? std::sqrt(m2 / static_cast<double>(mc_samples - 1) / static_cast<double>(mc_samples)) : 0.0;
  res.std_error = res.value > 0.0 ? se_mean / (2.0 * res.value) : 0.0;
  return res;
}

RademacherResult rademacher_norm(const std::vector<std::vector<double>>& e, const NormStructure& norm,
                                 std::uint64_t seed, std::size_t mc_samples) {
  return rademacher_norm(e, [&norm](std::span<const double> v) { return norm.value(v); }, seed, mc_samples);
}

double khintchine_maurey_ratio(const std::vector<std::vector<double>>& e, const LatticeSpec& lattice) {
  if (e.empty()) return 1.0;
  check_vectors(e);
  if (e[0].size() != static_cast<std::size_t>(lattice.dim()))
    throw DimensionMismatch("vectors do not match the lattice dimension");
  const double lhs =
      rademacher_norm(e, [&lattice](std::span<const double> v) { return lattice_norm(lattice, v); }).value;
  std::vector<double> sq(e[0].size(), 0.0);
  for (const auto& v : e)
    for (std::size_t k = 0; k < v.size(); ++k) sq[k] += v[k] * v[k];
  for (double& x : sq) x = std::sqrt(x);
  const double rhs = lattice_norm(lattice, sq);
  if (rhs == 0.0) return lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

// ---------------------------------------------------------------- R-bounds

namespace {

struct RSearch {
  const std::vector<LinearMap>& maps;
  const NormStructure& norm;
  const NormStructure dual;
  std::size_t dim;
  std::size_t evaluations = 0;

  struct State {
    std::vector<std::size_t> members;
    std::vector<std::vector<double>> e, u;
    double a = 0.0, b = 0.0;  // E|sum eps u|^2 and E|sum eps e|^2
    double value() const { return b > 0.0 ? std::sqrt(a / b) : 0.0; }
  };

  // Mean of |sum eps_i v_i|^2 over sign patterns with eps_1 = +1; optionally accumulates
  // grad[i] = mean of eps_i |S| grad N(S).
  double moment(const std::vector<std::vector<double>>& v, const NormStructure& n,
                std::vector<std::vector<double>>* grad) const {
    const std::size_t k = v.size();
    const std::size_t patterns = std::size_t{1} << (k - 1);
    std::vector<double> s(dim);
    if (grad) grad->assign(k, std::vector<double>(dim, 0.0));
    double acc = 0.0;
    for (std::size_t t = 0; t < patterns; ++t) {
      std::fill(s.begin(), s.end(), 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        const double sg = (i > 0 && ((t >> (i - 1)) & 1)) ? -1.0 : 1.0;
        for (std::size_t c = 0; c < dim; ++c) s[c] += sg * v[i][c];
      }
      if (grad) {
        double val = 0.0;
        const std::vector<double> g = n.gradient(s, &val);
        acc += val * val;
        for (std::size_t i = 0; i < k; ++i) {
          const double sg = (i > 0 && ((t >> (i - 1)) & 1)) ? -val : val;
          for (std::size_t c = 0; c < dim; ++c) (*grad)[i][c] += sg * g[c];
        }
      } else {
        const double val = n.value(s);
        acc += val * val;
      }
    }
    const double inv = 1.0 / static_cast<double>(patterns);
    if (grad)
      for (auto& g : *grad)
        for (double& x : g) x *= inv;
    return acc * inv;
  }

  void evaluate(State& s) {
    ++evaluations;
    s.u.resize(s.e.size());
    for (std::size_t i = 0; i < s.e.size(); ++i) s.u[i] = maps[s.members[i]].apply(s.e[i]);
    s.a = moment(s.u, norm, nullptr);
    s.b = moment(s.e, norm, nullptr);
    if (s.b > 0.0) {
      const double c = 1.0 / std::sqrt(s.b);
      for (auto& v : s.e)
        for (double& x : v) x *= c;
      for (auto& v : s.u)
        for (double& x : v) x *= c;
      s.a *= c * c;
      s.b = 1.0;
    }
  }

  // Gradient of log R with respect to the inputs.
  std::vector<std::vector<double>> gradient(const State& s) {
    std::vector<std::vector<double>> ga, gb;
    const double a = moment(s.u, norm, &ga);
    const double b = moment(s.e, norm, &gb);
    std::vector<std::vector<double>> g(s.e.size());
    for (std::size_t i = 0; i < s.e.size(); ++i) {
      g[i] = maps[s.members[i]].apply_adjoint(ga[i]);
      for (std::size_t c = 0; c < dim; ++c) g[i][c] = g[i][c] / a - gb[i][c] / b;
    }
    return g;
  }

  // One backtracking ascent step; returns false when no improving step was found.
  bool step(State& s, double& eta) {
    if (s.a <= 0.0) return false;
    const auto g = gradient(s);
    double gn = 0.0, en = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t c = 0; c < dim; ++c) {
        gn += g[i][c] * g[i][c];
        en += s.e[i][c] * s.e[i][c];
      }
    if (gn == 0.0) return false;
    const double scale = std::sqrt(en / gn);
    for (int tries = 0; tries < 12; ++tries, eta *= 0.5) {
      State t = s;
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t c = 0; c < dim; ++c) t.e[i][c] += eta * scale * g[i][c];
      evaluate(t);
      if (t.value() > s.value()) {
        s = std::move(t);
        eta = std::min(eta * 2.0, 1.0);
        return true;
      }
    }
    return false;
  }

  bool swap(State& s, Rng& rng) {
    if (maps.size() < 2) return false;
    State t = s;
    const std::size_t slot = rng.below(s.members.size());
    t.members[slot] = rng.below(maps.size());
    if (t.members[slot] == s.members[slot]) return false;
    evaluate(t);
    if (t.value() > s.value()) {
      s = std::move(t);
      return true;
    }
    return false;
  }

  double dual_witness(const State& s) {
    if (s.a <= 0.0 || s.b <= 0.0) return 0.0;
    std::vector<std::vector<double>> ga;
    const double a = moment(s.u, norm, &ga);
    const double ra = std::sqrt(a);
    double num = 0.0;
    for (std::size_t i = 0; i < ga.size(); ++i) {
      for (double& x : ga[i]) x /= ra;
      num += std::inner_product(s.u[i].begin(), s.u[i].end(), ga[i].begin(), 0.0);
    }
    const double d = std::sqrt(moment(ga, dual, nullptr));
    return d > 0.0 ? num / (d * std::sqrt(s.b)) : 0.0;
  }
};

}  // namespace

RBoundReport r_bound_estimate(const std::vector<LinearMap>& family, const MixedNormSpec& spec,
                              const RBoundOptions& options, const RBoundReport* previous) {
  if (family.empty()) throw ConfigError("empty operator family");
  const FieldShape& shape = family[0].domain();
  std::vector<LinearMap> maps;
  maps.reserve(family.size());
  for (const auto& t : family) {
    if (t.domain().size() != shape.size() || t.codomain().size() != shape.size())
      throw DimensionMismatch("family members must act on one space");
    maps.push_back(t.has_adjoint() ? t : t.densified());
  }
  for (int n : options.sizes)
    if (n < 1 || n > 16) throw ConfigError("random sums are limited to 1..16 terms");
  const NormStructure norm(spec, shape.axes);
  if (norm.size() != shape.size()) throw DimensionMismatch("norm spec does not match the family");
  RSearch search{maps, norm, norm.dual(), shape.size()};

  RBoundReport rep;
  std::vector<std::vector<double>> maximizers(maps.size());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (previous && k < previous->member_norms.size()) {
      rep.member_norms.push_back(previous->member_norms[k]);
      continue;
    }
    NormOptions no = options.member_norms;
    no.seed = derive_seed(options.member_norms.seed, 11, k);
    const NormReport nr = operator_norm(maps[k], spec, spec, no);
    rep.member_norms.push_back(nr.estimate);
    maximizers[k] = nr.maximizer;
  }
  std::vector<std::size_t> order(maps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rep.member_norms[a] > rep.member_norms[b]; });
  rep.best_single = rep.member_norms[order[0]];
  rep.estimate = rep.best_single;

  RSearch::State best;
  auto consider = [&](const RSearch::State& s) {
    if (s.value() > best.value() || best.members.empty()) best = s;
  };
  Rng rng(derive_seed(options.seed, 12));
  auto fresh_input = [&](std::size_t member, bool use_max) {
    if (use_max && !maximizers[member].empty()) return maximizers[member];
    std::vector<double> v(search.dim);
    for (double& x : v) x = rng.normal();
    return v;
  };

  if (previous && !previous->witness.members.empty()) {
    RSearch::State s;
    s.members = previous->witness.members;
    s.e = previous->witness.inputs;
    if (std::all_of(s.members.begin(), s.members.end(), [&](std::size_t m) { return m < maps.size(); })) {
      search.evaluate(s);
      consider(s);
    }
  }
  for (int n : options.sizes) {
    rep.n_max = std::max(rep.n_max, n);
    for (int r = 0; r < options.restarts; ++r) {
      RSearch::State s;
      if (r == 0 && previous && previous->witness.members.size() == static_cast<std::size_t>(n)) {
        s.members = previous->witness.members;
        s.e = previous->witness.inputs;
      } else {
        for (int i = 0; i < n; ++i) {
          const std::size_t m = r == 0 ? order[static_cast<std::size_t>(i) % order.size()] : rng.below(maps.size());
          s.members.push_back(m);
          s.e.push_back(fresh_input(m, r == 0));
        }
      }
      search.evaluate(s);
      double eta = 0.25;
      for (int it = 0; it < options.iterations; ++it) {
        const bool moved = search.step(s, eta);
        if (it % 4 == 3 || !moved) search.swap(s, rng);
        if (!moved && eta < 1e-3) break;
      }
      for (int t = 0; t < options.swap_trials; ++t)
        if (search.swap(s, rng)) search.step(s, eta);
      consider(s);
    }
  }
  rep.estimate = std::max(rep.estimate, best.value());
  rep.evaluations = search.evaluations;
  rep.witness.members = best.members;
  rep.witness.inputs = best.e;
  rep.dual_value = search.dual_witness(best);
  rep.duality_certified = rep.dual_value >= rep.estimate / 1.05;
  return rep;
}

// ---------------------------------------------------------------- decoupling

DecouplingSample decoupling_sample(const GridAxis& axis, std::uint64_t seed) {
  DecouplingSample y;
  y.axis = axis.id;
  Rng rng(seed);
  for (const auto& v : all_cubes(axis, 0, axis.level)) {
    const CellRange r = cube_cells(axis, v);
    y.point[v] = r.begin + rng.below(r.count);
  }
  return y;
}

namespace {

struct DecouplingSetup {
  GridAxis axis;
  int d = 1;
  double p = 2.0;
  LatticeSpec lattice = LatticeSpec::scalar();
  int deepest = -1;
  std::size_t sub = 1;  // subcubes of depth i+1 per active cube
  std::map<DyadicCube, std::vector<double>> values;  // per active V: sub x d block values
  DiscreteField blocks;                              // sum of the blocks

  DecouplingSetup(const DiscreteField& f, int i, int j, double p_) : p(p_), lattice(f.lattice()) {
    if (f.axes().size() != 1) throw AxisError("decoupling acts on a field with one axis");
    if (i < 0 || j < 0 || j > i) throw ConfigError("decoupling needs 0 <= j <= i");
    if (!(p >= 1.0)) throw ConfigError("decoupling exponent must be at least 1");
    axis = f.axes()[0];
    d = f.lattice_dim();
    sub = std::size_t{1} << ((i + 1) * axis.dim);
    blocks = f.zeros_like();
    for (const auto& v : decoupling_subgrid(axis, i, j)) {
      if (v.level > axis.level - 1 - i) continue;
      const DiscreteField b = martingale_block(f, v, i);
      blocks += b;
      const CellRange r = cube_cells(axis, v);
      const std::size_t step = r.count / sub;
      std::vector<double> vals(sub * d);
      for (std::size_t s = 0; s < sub; ++s)
        for (int k = 0; k < d; ++k) vals[s * d + k] = b[(r.begin + s * step) * d + k];
      values.emplace(v, std::move(vals));
      deepest = std::max(deepest, v.level);
    }
  }

  std::vector<DyadicCube> chain(const DyadicCube& q) const {
    std::vector<DyadicCube> c;
    for (int k = 0; k <= q.level; ++k) {
      const DyadicCube a = ancestor(q, k);
      if (values.count(a)) c.push_back(a);
    }
    return c;
  }

  double original() const {
    double acc = 0.0;
    for (std::size_t x = 0; x < blocks.points(); ++x)
      acc += abs_pow(lattice_norm(lattice, std::span<const double>(blocks.values().data() + x * d, d)), p);
    return acc * axis.cell_measure();
  }

  // Expectation over signs and subcube choices for one chain, by enumeration.
  double chain_expectation(const std::vector<DyadicCube>& c) const {
    std::vector<const std::vector<double>*> vals;
    for (const auto& v : c) vals.push_back(&values.at(v));
    std::vector<double> partial((c.size() + 1) * d, 0.0);
    double acc = 0.0;
    std::size_t leaves = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == c.size()) {
        acc += abs_pow(lattice_norm(lattice, std::span<const double>(partial.data() + k * d, d)), p);
        ++leaves;
        return;
      }
      for (int sg = 1; sg >= (k == 0 ? 1 : -1); sg -= 2)
        for (std::size_t s = 0; s < sub; ++s) {
          for (int q = 0; q < d; ++q)
            partial[(k + 1) * d + q] = partial[k * d + q] + sg * (*vals[k])[s * d + q];
          rec(k + 1);
        }
    };
    rec(0);
    return leaves ? acc / static_cast<double>(leaves) : 0.0;
  }

  double combos_per_chain() const {
    return std::pow(2.0 * static_cast<double>(sub), static_cast<double>(values.empty() ? 0 : chain(cubes_at(axis, deepest)[0]).size()));
  }

  // Integral for given subcube choices and signs of every active cube.
  double sampled(const std::map<DyadicCube, std::pair<std::size_t, int>>& choice) const {
    double acc = 0.0;
    std::vector<double> s(d);
    for (const auto& q : cubes_at(axis, deepest)) {
      std::fill(s.begin(), s.end(), 0.0);
      for (const auto& v : chain(q)) {
        const auto [sc, sg] = choice.at(v);
        const auto& vals = values.at(v);
        for (int k = 0; k < d; ++k) s[k] += sg * vals[sc * d + k];
      }
      acc += abs_pow(lattice_norm(lattice, s), p) * cube_measure(axis, q);
    }
    return acc;
  }
};

}  // namespace

double decoupled_integral(const DiscreteField& f, int i, int j, double p, const DecouplingSample& y,
                          const std::map<DyadicCube, int>& signs) {
  const DecouplingSetup st(f, i, j, p);
  if (y.axis != st.axis.id) throw AxisError("decoupling sample on another axis");
  if (st.values.empty()) return 0.0;
  std::map<DyadicCube, std::pair<std::size_t, int>> choice;
  for (const auto& [v, vals] : st.values) {
    auto it = y.point.find(v);
    auto sg = signs.find(v);
    if (it == y.point.end() || sg == signs.end()) throw ConfigError("sample or sign missing for an active cube");
    const CellRange r = cube_cells(st.axis, v);
    if (!r.contains(it->second)) throw ConfigError("sample point outside its cube");
    choice[v] = {(it->second - r.begin) / (r.count / st.sub), sg->second};
  }
  return st.sampled(choice);
}

DecouplingReport decoupling_ratio(const DiscreteField& f, int i, int j, double p, ExpectationMode mode,
                                  std::size_t trials, std::uint64_t seed) {
  const DecouplingSetup st(f, i, j, p);
  DecouplingReport rep;
  const double orig_p = st.original();
  double dec_p = 0.0;
  if (!st.values.empty()) {
    const bool exact = mode == ExpectationMode::exact ||
                       (mode == ExpectationMode::automatic && st.combos_per_chain() <= double(1 << 22));
    if (exact) {
      for (const auto& q : cubes_at(st.axis, st.deepest))
        dec_p += st.chain_expectation(st.chain(q)) * cube_measure(st.axis, q);
    } else {
      if (trials < 2) throw ConfigError("Monte-Carlo decoupling needs at least two trials");
      rep.exact = false;
      rep.trials = trials;
      Rng rng(seed);
      double mean = 0.0, m2 = 0.0;
      std::map<DyadicCube, std::pair<std::size_t, int>> choice;
      for (std::size_t t = 0; t < trials; ++t) {
        for (const auto& [v, vals] : st.values) choice[v] = {rng.below(st.sub), rng.sign()};
        const double x = st.sampled(choice);
        const double delta = x - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (x - mean);
      }
      dec_p = mean;
      rep.std_error = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
    }
  }
  rep.original = root(orig_p, p);
  rep.decoupled = root(dec_p, p);
  if (rep.decoupled == 0.0) {
    rep.degenerate = true;
    rep.ratio = 1.0;
  } else {
    rep.ratio = rep.original / rep.decoupled;
  }
  return rep;
}

// ---------------------------------------------------------------- square functions

double square_equivalence_ratio(const std::vector<DiscreteField>& fs, const MixedNormSpec& spec,
                                SquareFlavor flavor) {
  if (fs.empty()) throw ConfigError("empty function family");
  for (const auto& f : fs) fs[0].require_same_shape(f, "square function family");
  const auto& axes = fs[0].axes();
  if (axes.size() < (flavor == SquareFlavor::axis1 ? 1u : 2u))
    throw AxisError("square function flavor needs more axes");
  DiscreteField num = fs[0].zeros_like(), den = fs[0].zeros_like();
  auto add_square = [](DiscreteField& acc, const DiscreteField& g) {
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += g[k] * g[k];
  };
  for (const auto& f : fs) {
    add_square(den, f);
    if (flavor == SquareFlavor::full) {
      for (int l1 = 0; l1 < axes[0].level; ++l1) {
        const DiscreteField d1 = level_difference(f, axes[0].id, l1);
        for (int l2 = 0; l2 < axes[1].level; ++l2) add_square(num, level_difference(d1, axes[1].id, l2));
      }
    } else {
      const GridAxis& a = axes[flavor == SquareFlavor::axis1 ? 0 : 1];
      for (int l = 0; l < a.level; ++l) add_square(num, level_difference(f, a.id, l));
    }
  }
  for (double& x : num.values()) x = std::sqrt(x);
  for (double& x : den.values()) x = std::sqrt(x);
  const double dn = mixed_norm(den, spec);
  if (dn == 0.0) throw ConfigError("square function ratio with a zero family");
  return mixed_norm(num, spec) / dn;
}

}  // namespace dyadshift
