#include "dyadshift/norms.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

namespace dyadshift {

double bmo_norm(const DiscreteField& b) {
  if (b.axes().size() != 1 || b.lattice_dim() != 1)
    throw DimensionMismatch("bmo_norm expects a scalar field on one axis");
  const GridAxis& axis = b.axes()[0];
  const auto& v = b.values();
  double best = 0.0;
  for (int l = 0; l < axis.level; ++l) {
    const std::size_t n = axis.cells_in(l);
    for (std::size_t s = 0; s < v.size(); s += n) {
      double mean = 0.0;
      for (std::size_t c = s; c < s + n; ++c) mean += v[c];
      mean /= static_cast<double>(n);
      double dev = 0.0;
      for (std::size_t c = s; c < s + n; ++c) dev += std::fabs(v[c] - mean);
      best = std::max(best, dev / static_cast<double>(n));
    }
  }
  return best;
}

DiscreteField square_function(const Symbol2P& a) {
  DiscreteField s({a.axis1, a.axis2}, LatticeSpec::scalar());
  const std::size_t n2 = a.axis2.cells();
  for (const auto& [key, c] : a.coefficients) {
    const CellRange r1 = cube_cells(a.axis1, key.first.cube), r2 = cube_cells(a.axis2, key.second.cube);
    const double w = c * c / (cube_measure(a.axis1, key.first.cube) * cube_measure(a.axis2, key.second.cube));
    for (std::size_t x = r1.begin; x < r1.end(); ++x)
      for (std::size_t y = r2.begin; y < r2.end(); ++y) s[x * n2 + y] += w;
  }
  for (double& x : s.values()) x = std::sqrt(x);
  return s;
}

// ---------------------------------------------------------------- candidate family

bool CellSet::contains(const CellSet& other) const {
  for (std::size_t w = 0; w < mask.size(); ++w)
    if (other.mask[w] & ~mask[w]) return false;
  return true;
}

bool CellSet::empty() const {
  return std::all_of(mask.begin(), mask.end(), [](std::uint64_t w) { return w == 0; });
}

namespace {

std::size_t mask_words(const GridAxis& a1, const GridAxis& a2) { return (a1.cells() * a2.cells() + 63) / 64; }

double mask_measure(const std::vector<std::uint64_t>& mask, const GridAxis& a1, const GridAxis& a2) {
  std::size_t bits = 0;
  for (auto w : mask) bits += static_cast<std::size_t>(std::popcount(w));
  return static_cast<double>(bits) * a1.cell_measure() * a2.cell_measure();
}

CellSet union_of(const CellSet& a, const CellSet& b, const GridAxis& a1, const GridAxis& a2) {
  CellSet u;
  u.mask = a.mask;
  for (std::size_t w = 0; w < u.mask.size(); ++w) u.mask[w] |= b.mask[w];
  u.measure = mask_measure(u.mask, a1, a2);
  return u;
}

void require_family_axes(const Symbol2P& s, const OmegaCandidateFamily& f) {
  if (!(s.axis1 == f.axis1) || !(s.axis2 == f.axis2))
    throw AxisError("candidate family lives on different axes than the symbol");
}

}  // namespace

CellSet OmegaCandidateFamily::rectangle(const DyadicCube& i, const DyadicCube& j) const {
  CellSet s;
  s.mask.assign(mask_words(axis1, axis2), 0);
  const CellRange r1 = cube_cells(axis1, i), r2 = cube_cells(axis2, j);
  const std::size_t n2 = axis2.cells();
  for (std::size_t x = r1.begin; x < r1.end(); ++x)
    for (std::size_t y = r2.begin; y < r2.end(); ++y) {
      const std::size_t bit = x * n2 + y;
      s.mask[bit / 64] |= std::uint64_t{1} << (bit % 64);
    }
  s.measure = cube_measure(axis1, i) * cube_measure(axis2, j);
  return s;
}

void OmegaCandidateFamily::add(CellSet s) { members.push_back(std::move(s)); }

void OmegaCandidateFamily::check() const {
  const std::size_t words = mask_words(axis1, axis2);
  const std::size_t bits = axis1.cells() * axis2.cells();
  for (const auto& m : members) {
    if (m.mask.size() != words) throw ConfigError("candidate set has the wrong mask size");
    if (bits % 64 && (m.mask.back() >> (bits % 64)) != 0) throw ConfigError("candidate set leaves the grid");
    if (m.empty()) throw ConfigError("empty candidate set");
    if (std::fabs(m.measure - mask_measure(m.mask, axis1, axis2)) > 1e-12)
      throw ConfigError("candidate set measure is inconsistent with its cells");
  }
}

OmegaCandidateFamily default_omega_family(const Symbol2P& lambda) {
  OmegaCandidateFamily fam;
  fam.axis1 = lambda.axis1;
  fam.axis2 = lambda.axis2;
  std::set<std::pair<DyadicCube, DyadicCube>> support, singles;
  for (const auto& [key, c] : lambda.coefficients)
    if (c != 0.0) support.insert({key.first.cube, key.second.cube});
  for (const auto& [i, j] : support)
    for (int a = 0; a <= i.level; ++a)
      for (int b = 0; b <= j.level; ++b) singles.insert({ancestor(i, a), ancestor(j, b)});

  std::vector<CellSet> base;
  for (const auto& [i, j] : support) base.push_back(fam.rectangle(i, j));
  const DiscreteField s = square_function(lambda);
  std::vector<double> levels;
  for (double v : s.values())
    if (v > 0.0) levels.push_back(v);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double t : levels) {
    CellSet set;
    set.mask.assign(mask_words(fam.axis1, fam.axis2), 0);
    for (std::size_t c = 0; c < s.size(); ++c)
      if (s[c] >= t) set.mask[c / 64] |= std::uint64_t{1} << (c % 64);
    set.measure = mask_measure(set.mask, fam.axis1, fam.axis2);
    base.push_back(std::move(set));
  }

  std::set<std::vector<std::uint64_t>> seen;
  auto push = [&](CellSet c) {
    if (seen.insert(c.mask).second) fam.add(std::move(c));
  };
  for (const auto& [i, j] : singles) push(fam.rectangle(i, j));
  for (const auto& b : base) push(b);
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a + 1; b < base.size(); ++b) push(union_of(base[a], base[b], fam.axis1, fam.axis2));
  return fam;
}

double product_bmo_estimate(const Symbol2P& lambda, const OmegaCandidateFamily& family) {
  require_family_axes(lambda, family);
  std::map<std::pair<DyadicCube, DyadicCube>, double> weight;
  for (const auto& [key, c] : lambda.coefficients)
    if (c != 0.0) weight[{key.first.cube, key.second.cube}] += c * c;
  if (weight.empty()) return 0.0;
  std::vector<CellSet> rects;
  std::vector<double> w;
  for (const auto& [r, v] : weight) {
    rects.push_back(family.rectangle(r.first, r.second));
    w.push_back(v);
  }
  double best = 0.0;
  for (const auto& omega : family.members) {
    if (omega.measure <= 0.0) throw ConfigError("candidate set has zero measure");
    double sum = 0.0;
    for (std::size_t k = 0; k < rects.size(); ++k)
      if (omega.contains(rects[k])) sum += w[k];
    best = std::max(best, sum / omega.measure);
  }
  return std::sqrt(best);
}

double product_bmo_estimate(const Symbol2P& lambda) {
  return product_bmo_estimate(lambda, default_omega_family(lambda));
}

KeyEstimate key_estimate_ratio(const Symbol2P& lambda, const Symbol2P& a) {
  if (!(lambda.axis1 == a.axis1) || !(lambda.axis2 == a.axis2))
    throw AxisError("key estimate needs coefficient maps on the same axes");
  KeyEstimate k;
  for (const auto& [key, c] : lambda.coefficients) {
    auto it = a.coefficients.find(key);
    if (it != a.coefficients.end()) k.lhs += std::fabs(c) * std::fabs(it->second);
  }
  if (k.lhs == 0.0) return k;
  k.bmo = product_bmo_estimate(lambda);
  const DiscreteField s = square_function(a);
  for (double v : s.values()) k.square_l1 += v;
  k.square_l1 *= s.cell_measure();
  const double den = k.bmo * k.square_l1;
  if (den == 0.0) {
    k.degenerate = true;
    k.ratio = std::numeric_limits<double>::infinity();
  } else {
    k.ratio = k.lhs / den;
  }
  return k;
}

// ---------------------------------------------------------------- maximal functions

namespace {

void max_into(DiscreteField& acc, const DiscreteField& v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], v[i]);
}

}  // namespace

DiscreteField maximal_1p(const DiscreteField& f, int axis_id) {
  const GridAxis& axis = f.axis(axis_id);
  const DiscreteField a = abs(f);
  DiscreteField m = a;
  for (int l = 0; l < axis.level; ++l) max_into(m, conditional_expectation(a, axis_id, l));
  return m;
}

DiscreteField strong_maximal(const DiscreteField& f, int axis1, int axis2) {
  const GridAxis& a1 = f.axis(axis1);
  const GridAxis& a2 = f.axis(axis2);
  const DiscreteField a = abs(f);
  DiscreteField m = a;
  for (int l1 = 0; l1 <= a1.level; ++l1) {
    const DiscreteField g = l1 == a1.level ? a : conditional_expectation(a, axis1, l1);
    for (int l2 = 0; l2 <= a2.level; ++l2)
      max_into(m, l2 == a2.level ? g : conditional_expectation(g, axis2, l2));
  }
  return m;
}

double fefferman_stein_ratio(const std::vector<DiscreteField>& fs, double r, const MixedNormSpec& spec,
                             MaximalKind kind) {
  if (fs.empty()) throw ConfigError("empty function family");
  const auto& axes = fs[0].axes();
  for (const auto& f : fs)
    if (f.axes() != axes || f.lattice_dim() != 1)
      throw DimensionMismatch("family members must be scalar fields on the same axes");
  const std::size_t m = fs.size();
  DiscreteField stacked(axes, LatticeSpec::flat(static_cast<int>(m), r));
  for (std::size_t p = 0; p < fs[0].size(); ++p)
    for (std::size_t j = 0; j < m; ++j) stacked[p * m + j] = fs[j][p];
  MixedNormSpec s = spec;
  s.lattice = stacked.lattice();
  const double den = mixed_norm(stacked, s);
  if (den == 0.0) throw ConfigError("Fefferman-Stein ratio with a zero family");
  DiscreteField mf;
  if (kind == MaximalKind::one_parameter) {
    mf = maximal_1p(stacked, axes[0].id);
  } else {
    if (axes.size() < 2) throw AxisError("strong maximal function needs two axes");
    mf = strong_maximal(stacked, axes[0].id, axes[1].id);
  }
  return mixed_norm(mf, s) / den;
}

// ---------------------------------------------------------------- operator norms

namespace {

bool all_two(const MixedNormSpec& s) {
  for (double p : s.axis_exponents)
    if (p != 2.0) return false;
  for (double p : s.lattice.exponents())
    if (p != 2.0) return false;
  return true;
}

}  // namespace

const char* to_string(NormMethod m) { return m == NormMethod::exact_svd ? "exact-svd" : "ascent-search"; }

bool exact_norm_available(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out) {
  return all_two(in) && all_two(out) && t.domain().size() <= LinearMap::kMaxDenseDim &&
         t.codomain().size() <= LinearMap::kMaxDenseDim;
}

NormReport operator_norm(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out,
                         NormMethod method, const NormOptions& options) {
  const NormStructure nin(in, t.domain().axes), nout(out, t.codomain().axes);
  if (nin.size() != t.domain().size() || nout.size() != t.codomain().size())
    throw DimensionMismatch("norm specs do not match the map's field shapes");
  NormReport rep;
  rep.method = method;
  if (method == NormMethod::exact_svd) {
    if (!all_two(in) || !all_two(out)) throw ConfigError("exact operator norm needs all exponents equal to 2");
    const Eigen::MatrixXd m = t.assemble();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const double sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    rep.estimate = sigma * std::sqrt(nout.uniform_weight() / nin.uniform_weight());
    return rep;
  }
  if (options.restarts < 1) throw ConfigError("ascent search needs at least one restart");
  std::optional<LinearMap> dense;
  if (!t.has_adjoint()) {
    if (t.domain().size() > LinearMap::kMaxDenseDim || t.codomain().size() > LinearMap::kMaxDenseDim)
      throw ConfigError("ascent search needs an adjoint for maps too large to assemble");
    dense = t.densified();
  }
  const LinearMap& op = dense ? *dense : t;
  const NormStructure in_dual = nin.dual();
  rep.lower_bound = true;
  rep.restarts = options.restarts;
  std::vector<double> x(nin.size()), y(nout.size()), z(nin.size());
  for (int r = 0; r < options.restarts; ++r) {
    const std::uint64_t seed = derive_seed(options.seed, 0x6e6f726d, static_cast<std::uint64_t>(r));
    rep.seeds.push_back(seed);
    Rng rng(seed);
    for (double& v : x) v = rng.normal();
    const double n0 = nin.value(x);
    if (n0 == 0.0) continue;
    for (double& v : x) v /= n0;
    double best = 0.0;
    int stall = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
      ++rep.iterations;
      op.apply_into(x, y);
      double v = 0.0;
      const std::vector<double> g = nout.gradient(y, &v);
      if (v > rep.estimate) {
        rep.estimate = v;
        rep.maximizer = x;
      }
      if (v <= best * (1.0 + options.tolerance)) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }
      best = std::max(best, v);
      if (v == 0.0) break;
      op.apply_adjoint_into(g, z);
      if (std::all_of(z.begin(), z.end(), [](double a) { return a == 0.0; })) break;
      x = in_dual.gradient(z);
    }
  }
  return rep;
}

NormReport operator_norm(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out,
                         const NormOptions& options) {
  return operator_norm(t, in, out,
                       exact_norm_available(t, in, out) ? NormMethod::exact_svd : NormMethod::ascent_search,
                       options);
}

}  // namespace dyadshift
