#include "dyadshift/paraproduct.hpp"

#include <cmath>
#include <memory>

#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"

namespace dyadshift {

namespace {

// Profile of a test or output function on the cells of a cube: either h_I^eta or 1_I/|I|.
enum class Profile { haar, average };

std::vector<double> profile(const GridAxis& axis, const HaarIndex& h, Profile kind) {
  if (kind == Profile::haar) return haar_profile(axis, h);
  const std::size_t n = cube_cells(axis, h.cube).count;
  return std::vector<double>(n, 1.0 / cube_measure(axis, h.cube));
}

void require_axis(const DiscreteField& f, const GridAxis& axis, const char* what) {
  if (!f.has_axis(axis.id) || !(f.axis(axis.id) == axis))
    throw AxisError(std::string(what) + ": field lacks axis " + std::to_string(axis.id));
}

void require_axes(const DiscreteField& f, std::initializer_list<GridAxis> axes, const char* what) {
  std::vector<GridAxis> want(axes);
  if (f.axes() != want) throw AxisError(std::string(what) + ": field axes do not match the symbol");
}

// sum over (h, c) of c <f, u_h> v_h along one axis, where u and v have the given profiles.
DiscreteField one_axis_operator(const GridAxis& axis, const std::map<HaarIndex, double>& coefs,
                                const DiscreteField& f, Profile u, Profile v) {
  require_axis(f, axis, "paraproduct");
  DiscreteField out = f.zeros_like();
  const double cm = axis.cell_measure();
  for (const auto& [h, c] : coefs) {
    if (c == 0.0) continue;
    const CellRange r = cube_cells(axis, h.cube);
    std::vector<double> w = profile(axis, h, u);
    for (double& x : w) x *= cm;
    DiscreteField pairing = reduce_axis_range(f, axis.id, r, w);
    std::vector<double> p = profile(axis, h, v);
    for (double& x : p) x *= c;
    add_insert(out, axis.id, r, p, pairing);
  }
  return out;
}

// Same on a field with axes exactly (a1, a2) and rectangle coefficients.
DiscreteField rectangle_operator(const GridAxis& a1, const GridAxis& a2,
                                 const std::map<RectangleKey, double>& coefs, const DiscreteField& f,
                                 Profile u1, Profile u2, Profile v1, Profile v2) {
  require_axes(f, {a1, a2}, "bi-parameter paraproduct");
  DiscreteField out = f.zeros_like();
  const std::size_t n2 = a2.cells();
  const int d = f.lattice_dim();
  const double cm = a1.cell_measure() * a2.cell_measure();
  std::vector<double> acc(static_cast<std::size_t>(d));
  for (const auto& [key, c] : coefs) {
    if (c == 0.0) continue;
    const CellRange r1 = cube_cells(a1, key.first.cube), r2 = cube_cells(a2, key.second.cube);
    const auto p1 = profile(a1, key.first, u1), p2 = profile(a2, key.second, u2);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t x = 0; x < r1.count; ++x)
      for (std::size_t y = 0; y < r2.count; ++y) {
        const double w = p1[x] * p2[y] * cm;
        const double* src = f.values().data() + ((r1.begin + x) * n2 + r2.begin + y) * d;
        for (int k = 0; k < d; ++k) acc[k] += w * src[k];
      }
    const auto q1 = profile(a1, key.first, v1), q2 = profile(a2, key.second, v2);
    for (std::size_t x = 0; x < r1.count; ++x)
      for (std::size_t y = 0; y < r2.count; ++y) {
        const double w = c * q1[x] * q2[y];
        double* dst = out.values().data() + ((r1.begin + x) * n2 + r2.begin + y) * d;
        for (int k = 0; k < d; ++k) dst[k] += w * acc[k];
      }
  }
  return out;
}

void check_pair(const GridAxis& axis, const HaarIndex& in, const HaarIndex& out, int i1, int i2) {
  check_cube(axis, in.cube);
  check_cube(axis, out.cube);
  if (in.cube.axis != axis.id || out.cube.axis != axis.id)
    throw AxisError("Haar index on the wrong axis");
  if (in.cube.level < i1 || out.cube.level < i2)
    throw ConfigError("Haar cube is coarser than its block depth");
  const DyadicCube k = ancestor(in.cube, i1);
  if (!(ancestor(out.cube, i2) == k)) throw ConfigError("I1 and I2 have different parents K");
  check_block_depth(axis, k.level, std::max(i1, i2));
}

double allowance_of(const GridAxis& axis, const HaarIndex& in, const HaarIndex& out, int i1) {
  const DyadicCube k = ancestor(in.cube, i1);
  return std::sqrt(cube_measure(axis, in.cube) * cube_measure(axis, out.cube)) / cube_measure(axis, k);
}

void check_budget(double measured, double allowed, double tol) {
  if (measured > allowed * (1.0 + tol))
    throw ConfigError("symbol exceeds its BMO allowance: " + std::to_string(measured) + " > " +
                      std::to_string(allowed));
}

DiscreteField pi_full_or_mixed(const Symbol2P& s, const DiscreteField& f, ParaproductFlavor flavor,
                               bool adjoint) {
  if (flavor == ParaproductFlavor::standard)
    return adjoint ? apply_pi_full_adjoint(s, f) : apply_pi_full(s, f);
  return adjoint ? apply_pi_mixed_adjoint(s, f) : apply_pi_mixed(s, f);
}

std::vector<std::pair<HaarIndex, HaarIndex>> block_pairs(const GridAxis& axis, const DyadicCube& k,
                                                         int i1, int i2) {
  std::vector<std::pair<HaarIndex, HaarIndex>> out;
  const auto etas = cancellative_patterns(axis.dim);
  for (const auto& a : descendants(axis, k, i1))
    for (const auto& b : descendants(axis, k, i2))
      for (unsigned e1 : etas)
        for (unsigned e2 : etas) out.push_back({{a, e1}, {b, e2}});
  return out;
}

}  // namespace

// ---------------------------------------------------------------- symbols

void Symbol1P::add(const HaarIndex& h, double c) {
  check_cube(axis, h.cube);
  if (h.cube.axis != axis.id) throw AxisError("symbol coefficient on the wrong axis");
  if (h.cube.level >= axis.level || h.eta == 0 || h.eta >= (1u << axis.dim))
    throw LevelError("symbol coefficient needs a cancellative Haar function of a non-finest cube");
  coefficients[h] += c;
}

DiscreteField Symbol1P::field() const {
  DiscreteField b({axis}, LatticeSpec::scalar());
  for (const auto& [h, c] : coefficients) {
    const CellRange r = cube_cells(axis, h.cube);
    const auto p = haar_profile(axis, h);
    for (std::size_t x = 0; x < r.count; ++x) b[r.begin + x] += c * p[x];
  }
  return b;
}

void Symbol1P::scale(double c) {
  for (auto& [h, v] : coefficients) v *= c;
}

void Symbol2P::add(const HaarIndex& i, const HaarIndex& j, double c) {
  for (const auto& [h, a] : {std::pair{i, axis1}, std::pair{j, axis2}}) {
    check_cube(a, h.cube);
    if (h.cube.axis != a.id) throw AxisError("symbol coefficient on the wrong axis");
    if (h.cube.level >= a.level || h.eta == 0 || h.eta >= (1u << a.dim))
      throw LevelError("symbol coefficient needs cancellative Haar functions of non-finest cubes");
  }
  coefficients[{i, j}] += c;
}

DiscreteField Symbol2P::field() const {
  DiscreteField b({axis1, axis2}, LatticeSpec::scalar());
  const std::size_t n2 = axis2.cells();
  for (const auto& [key, c] : coefficients) {
    const CellRange r1 = cube_cells(axis1, key.first.cube), r2 = cube_cells(axis2, key.second.cube);
    const auto p1 = haar_profile(axis1, key.first), p2 = haar_profile(axis2, key.second);
    for (std::size_t x = 0; x < r1.count; ++x)
      for (std::size_t y = 0; y < r2.count; ++y) b[(r1.begin + x) * n2 + r2.begin + y] += c * p1[x] * p2[y];
  }
  return b;
}

void Symbol2P::scale(double c) {
  for (auto& [k, v] : coefficients) v *= c;
}

void PartialSymbol2P::add(const HaarIndex& in, const HaarIndex& out, Symbol1P b) {
  check_pair(outer, in, out, i1, i2);
  if (!(b.axis == inner)) throw AxisError("partial paraproduct symbol on the wrong axis");
  entries.insert_or_assign(ModelKey{in, out}, std::move(b));
}

double PartialSymbol2P::allowance(const ModelKey& key) const {
  return allowance_of(outer, key.in, key.out, i1);
}

void PartialSymbol2P::check_normalization(double tol) const {
  for (const auto& [key, b] : entries) check_budget(bmo_norm(b.field()), allowance(key), tol);
}

void TriSymbolT1::add(const HaarIndex& in, const HaarIndex& out, Symbol2P lambda) {
  check_pair(axis1, in, out, i1, i2);
  if (!(lambda.axis1 == axis2) || !(lambda.axis2 == axis3))
    throw AxisError("type 1 inner symbol on the wrong axes");
  entries.insert_or_assign(ModelKey{in, out}, std::move(lambda));
}

double TriSymbolT1::allowance(const ModelKey& key) const {
  return allowance_of(axis1, key.in, key.out, i1);
}

void TriSymbolT1::check_normalization(double tol) const {
  for (const auto& [key, s] : entries) check_budget(product_bmo_estimate(s), allowance(key), tol);
}

void TriSymbolT2::add(const TriKey& key, Symbol1P b) {
  check_pair(axis1, key.in1, key.out1, i1, i2);
  check_pair(axis2, key.in2, key.out2, j1, j2);
  if (!(b.axis == axis3)) throw AxisError("type 2 symbol on the wrong axis");
  entries.insert_or_assign(key, std::move(b));
}

double TriSymbolT2::allowance(const TriKey& key) const {
  return allowance_of(axis1, key.in1, key.out1, i1) * allowance_of(axis2, key.in2, key.out2, j1);
}

void TriSymbolT2::check_normalization(double tol) const {
  for (const auto& [key, b] : entries) check_budget(bmo_norm(b.field()), allowance(key), tol);
}

// ---------------------------------------------------------------- application

DiscreteField apply_pi(const Symbol1P& b, const DiscreteField& f) {
  return one_axis_operator(b.axis, b.coefficients, f, Profile::average, Profile::haar);
}

DiscreteField apply_pi_adjoint(const Symbol1P& b, const DiscreteField& g) {
  return one_axis_operator(b.axis, b.coefficients, g, Profile::haar, Profile::average);
}

DiscreteField apply_pi_full(const Symbol2P& s, const DiscreteField& f) {
  return rectangle_operator(s.axis1, s.axis2, s.coefficients, f, Profile::average, Profile::average,
                            Profile::haar, Profile::haar);
}

DiscreteField apply_pi_full_adjoint(const Symbol2P& s, const DiscreteField& g) {
  return rectangle_operator(s.axis1, s.axis2, s.coefficients, g, Profile::haar, Profile::haar,
                            Profile::average, Profile::average);
}

DiscreteField apply_pi_mixed(const Symbol2P& s, const DiscreteField& f) {
  return rectangle_operator(s.axis1, s.axis2, s.coefficients, f, Profile::haar, Profile::average,
                            Profile::average, Profile::haar);
}

DiscreteField apply_pi_mixed_adjoint(const Symbol2P& s, const DiscreteField& g) {
  return rectangle_operator(s.axis1, s.axis2, s.coefficients, g, Profile::average, Profile::haar,
                            Profile::haar, Profile::average);
}

DiscreteField apply_partial_2p(const PartialSymbol2P& p, const DiscreteField& f) {
  require_axis(f, p.outer, "partial paraproduct");
  require_axis(f, p.inner, "partial paraproduct");
  DiscreteField out = f.zeros_like();
  const HaarIndex* last = nullptr;
  DiscreteField c;
  for (const auto& [key, b] : p.entries) {
    if (!last || !(*last == key.in)) {
      c = haar_pairing(f, key.in);
      last = &key.in;
    }
    add_insert(out, p.outer.id, cube_cells(p.outer, key.out.cube), haar_profile(p.outer, key.out),
               apply_pi(b, c));
  }
  return out;
}

DiscreteField apply_partial_2p_adjoint(const PartialSymbol2P& p, const DiscreteField& g) {
  require_axis(g, p.outer, "partial paraproduct");
  require_axis(g, p.inner, "partial paraproduct");
  DiscreteField out = g.zeros_like();
  std::map<HaarIndex, DiscreteField> pairings;
  for (const auto& [key, b] : p.entries) {
    auto it = pairings.find(key.out);
    if (it == pairings.end()) it = pairings.emplace(key.out, haar_pairing(g, key.out)).first;
    add_insert(out, p.outer.id, cube_cells(p.outer, key.in.cube), haar_profile(p.outer, key.in),
               apply_pi_adjoint(b, it->second));
  }
  return out;
}

DiscreteField apply_tri_type1(const TriSymbolT1& t, const DiscreteField& f) {
  require_axes(f, {t.axis1, t.axis2, t.axis3}, "type 1 tri-parameter paraproduct");
  DiscreteField out = f.zeros_like();
  const HaarIndex* last = nullptr;
  DiscreteField c;
  for (const auto& [key, s] : t.entries) {
    if (!last || !(*last == key.in)) {
      c = haar_pairing(f, key.in);
      last = &key.in;
    }
    add_insert(out, t.axis1.id, cube_cells(t.axis1, key.out.cube), haar_profile(t.axis1, key.out),
               pi_full_or_mixed(s, c, t.flavor, false));
  }
  return out;
}

DiscreteField apply_tri_type1_adjoint(const TriSymbolT1& t, const DiscreteField& g) {
  require_axes(g, {t.axis1, t.axis2, t.axis3}, "type 1 tri-parameter paraproduct");
  DiscreteField out = g.zeros_like();
  std::map<HaarIndex, DiscreteField> pairings;
  for (const auto& [key, s] : t.entries) {
    auto it = pairings.find(key.out);
    if (it == pairings.end()) it = pairings.emplace(key.out, haar_pairing(g, key.out)).first;
    add_insert(out, t.axis1.id, cube_cells(t.axis1, key.in.cube), haar_profile(t.axis1, key.in),
               pi_full_or_mixed(s, it->second, t.flavor, true));
  }
  return out;
}

namespace {

DiscreteField tri_type2(const TriSymbolT2& t, const DiscreteField& f, bool adjoint) {
  require_axes(f, {t.axis1, t.axis2, t.axis3}, "type 2 tri-parameter paraproduct");
  DiscreteField out = f.zeros_like();
  std::map<std::pair<HaarIndex, HaarIndex>, DiscreteField> pairings;
  const std::vector<GridAxis> rest = axes_without(f.axes(), t.axis1.id);
  for (const auto& [key, b] : t.entries) {
    const HaarIndex& a1 = adjoint ? key.out1 : key.in1;
    const HaarIndex& a2 = adjoint ? key.out2 : key.in2;
    const HaarIndex& o1 = adjoint ? key.in1 : key.out1;
    const HaarIndex& o2 = adjoint ? key.in2 : key.out2;
    auto it = pairings.find({a1, a2});
    if (it == pairings.end())
      it = pairings.emplace(std::pair{a1, a2}, haar_pairing(haar_pairing(f, a1), a2)).first;
    DiscreteField y = adjoint ? apply_pi_adjoint(b, it->second) : apply_pi(b, it->second);
    DiscreteField z(rest, f.lattice());
    add_insert(z, t.axis2.id, cube_cells(t.axis2, o2.cube), haar_profile(t.axis2, o2), y);
    add_insert(out, t.axis1.id, cube_cells(t.axis1, o1.cube), haar_profile(t.axis1, o1), z);
  }
  return out;
}

}  // namespace

DiscreteField apply_tri_type2(const TriSymbolT2& t, const DiscreteField& f) { return tri_type2(t, f, false); }

DiscreteField apply_tri_type2_adjoint(const TriSymbolT2& t, const DiscreteField& g) {
  return tri_type2(t, g, true);
}

// ---------------------------------------------------------------- random symbols

Symbol1P random_symbol_1p(const GridAxis& axis, double budget, std::uint64_t seed, const SymbolDraw& draw) {
  if (!(budget > 0.0)) throw ConfigError("symbol budget must be positive");
  const int top = draw.max_level < 0 ? axis.level - 1 : std::min(draw.max_level, axis.level - 1);
  Rng rng(seed);
  for (;;) {
    Symbol1P s;
    s.axis = axis;
    for (const auto& h : all_haar(axis)) {
      if (h.cube.level > top) continue;
      if (rng.uniform() < draw.density) s.coefficients[h] = rng.normal();
    }
    const double m = bmo_norm(s.field());
    if (m > 0.0) {
      s.scale(budget / m);
      return s;
    }
  }
}

Symbol2P random_symbol_2p(const GridAxis& axis1, const GridAxis& axis2, double budget, std::uint64_t seed,
                          const SymbolDraw& draw) {
  if (!(budget > 0.0)) throw ConfigError("symbol budget must be positive");
  const int top1 = draw.max_level < 0 ? axis1.level - 1 : std::min(draw.max_level, axis1.level - 1);
  const int top2 = draw.max_level < 0 ? axis2.level - 1 : std::min(draw.max_level, axis2.level - 1);
  Rng rng(seed);
  for (;;) {
    Symbol2P s;
    s.axis1 = axis1;
    s.axis2 = axis2;
    for (const auto& i : all_haar(axis1)) {
      if (i.cube.level > top1) continue;
      for (const auto& j : all_haar(axis2))
        if (j.cube.level <= top2 && rng.uniform() < draw.density) s.coefficients[{i, j}] = rng.normal();
    }
    const double m = product_bmo_estimate(s);
    if (m > 0.0) {
      s.scale(budget / m);
      return s;
    }
  }
}

PartialSymbol2P random_partial_2p(const GridAxis& outer, const GridAxis& inner, int i1, int i2,
                                  double budget, std::uint64_t seed, const SymbolDraw& inner_draw,
                                  int band) {
  PartialSymbol2P p;
  p.outer = outer;
  p.inner = inner;
  p.i1 = i1;
  p.i2 = i2;
  int top = outer.level - 1 - std::max(i1, i2);
  if (top < 0) throw LevelError("block depths exceed the grid");
  if (band >= 0) top = std::min(top, band);
  std::uint64_t counter = 0;
  for (const auto& k : all_cubes(outer, 0, top))
    for (const auto& [in, out] : block_pairs(outer, k, i1, i2)) {
      const double allowed = allowance_of(outer, in, out, i1);
      p.add(in, out, random_symbol_1p(inner, budget * allowed, derive_seed(seed, 1, counter++), inner_draw));
    }
  return p;
}

TriSymbolT1 random_tri_type1(const GridAxis& axis1, const GridAxis& axis2, const GridAxis& axis3, int i1,
                             int i2, ParaproductFlavor flavor, double budget, std::uint64_t seed,
                             const SymbolDraw& inner_draw) {
  TriSymbolT1 t;
  t.axis1 = axis1;
  t.axis2 = axis2;
  t.axis3 = axis3;
  t.i1 = i1;
  t.i2 = i2;
  t.flavor = flavor;
  const int top = axis1.level - 1 - std::max(i1, i2);
  if (top < 0) throw LevelError("block depths exceed the grid");
  std::uint64_t counter = 0;
  for (const auto& k : all_cubes(axis1, 0, top))
    for (const auto& [in, out] : block_pairs(axis1, k, i1, i2)) {
      const double allowed = allowance_of(axis1, in, out, i1);
      t.add(in, out,
            random_symbol_2p(axis2, axis3, budget * allowed, derive_seed(seed, 2, counter++), inner_draw));
    }
  return t;
}

TriSymbolT2 random_tri_type2(const GridAxis& axis1, const GridAxis& axis2, const GridAxis& axis3,
                             std::array<int, 4> ij, double budget, std::uint64_t seed,
                             const SymbolDraw& inner_draw) {
  TriSymbolT2 t;
  t.axis1 = axis1;
  t.axis2 = axis2;
  t.axis3 = axis3;
  t.i1 = ij[0];
  t.i2 = ij[1];
  t.j1 = ij[2];
  t.j2 = ij[3];
  const int top1 = axis1.level - 1 - std::max(t.i1, t.i2);
  const int top2 = axis2.level - 1 - std::max(t.j1, t.j2);
  if (top1 < 0 || top2 < 0) throw LevelError("block depths exceed the grid");
  std::uint64_t counter = 0;
  for (const auto& k : all_cubes(axis1, 0, top1))
    for (const auto& [in1, out1] : block_pairs(axis1, k, t.i1, t.i2))
      for (const auto& v : all_cubes(axis2, 0, top2))
        for (const auto& [in2, out2] : block_pairs(axis2, v, t.j1, t.j2)) {
          const TriKey key{in1, out1, in2, out2};
          const double allowed = t.allowance(key);
          t.add(key, random_symbol_1p(axis3, budget * allowed, derive_seed(seed, 3, counter++), inner_draw));
        }
  return t;
}

namespace {

template <class S, class Apply, class Adjoint>
LinearMap symbol_map(std::vector<GridAxis> axes, const LatticeSpec& lattice, S symbol, Apply apply,
                     Adjoint adjoint) {
  const FieldShape shape{std::move(axes), lattice};
  auto held = std::make_shared<const S>(std::move(symbol));
  return LinearMap::from_fields(
      shape, shape, [held, apply](const DiscreteField& f) { return apply(*held, f); },
      [held, adjoint](const DiscreteField& g) { return adjoint(*held, g); });
}

}  // namespace

LinearMap pi_map(const Symbol1P& b, const LatticeSpec& lattice) {
  return symbol_map({b.axis}, lattice, b, apply_pi, apply_pi_adjoint);
}

LinearMap pi_full_map(const Symbol2P& lambda, const LatticeSpec& lattice) {
  return symbol_map({lambda.axis1, lambda.axis2}, lattice, lambda, apply_pi_full, apply_pi_full_adjoint);
}

LinearMap pi_mixed_map(const Symbol2P& lambda, const LatticeSpec& lattice) {
  return symbol_map({lambda.axis1, lambda.axis2}, lattice, lambda, apply_pi_mixed, apply_pi_mixed_adjoint);
}

LinearMap partial_2p_map(const PartialSymbol2P& p, const LatticeSpec& lattice) {
  return symbol_map({p.outer, p.inner}, lattice, p, apply_partial_2p, apply_partial_2p_adjoint);
}

LinearMap tri_type1_map(const TriSymbolT1& t, const LatticeSpec& lattice) {
  return symbol_map({t.axis1, t.axis2, t.axis3}, lattice, t, apply_tri_type1, apply_tri_type1_adjoint);
}

LinearMap tri_type2_map(const TriSymbolT2& t, const LatticeSpec& lattice) {
  return symbol_map({t.axis1, t.axis2, t.axis3}, lattice, t, apply_tri_type2, apply_tri_type2_adjoint);
}

}  // namespace dyadshift
