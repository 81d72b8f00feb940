#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "dyadshift/haar.hpp"
#include "dyadshift/shift.hpp"

using namespace dyadshift;

namespace {

Matrix random_matrix(Rng& rng, int d, double scale = 1.0) {
  Matrix m(static_cast<std::size_t>(d * d));
  for (double& x : m) x = scale * rng.uniform(-1.0, 1.0);
  return m;
}

ShiftSpec1P random_shift_1p(const GridAxis& axis, int d, int i1, int i2, Rng& rng) {
  ShiftSpec1P s;
  s.i1 = i1;
  s.i2 = i2;
  s.kernels.axis = axis;
  s.kernels.d = d;
  const int top = axis.level - 1 - std::max(i1, i2);
  for (const auto& k : all_cubes(axis, 0, top)) {
    const int room = axis.level - k.level;
    const int dx = static_cast<int>(rng.below(room + 1)), dy = static_cast<int>(rng.below(room + 1));
    s.kernels.add(KernelBlock::on_subcubes(axis, k, d, dx, dy,
                                           [&](std::size_t, std::size_t) { return random_matrix(rng, d); }));
  }
  return s;
}

ShiftSpec2P random_shift_2p(const GridAxis& a1, const GridAxis& a2, int d, std::array<int, 4> ij,
                            Rng& rng) {
  ShiftSpec2P s;
  s.i1 = ij[0];
  s.i2 = ij[1];
  s.j1 = ij[2];
  s.j2 = ij[3];
  s.kernels.axis1 = a1;
  s.kernels.axis2 = a2;
  s.kernels.d = d;
  for (const auto& k : all_cubes(a1, 0, a1.level - 1 - std::max(s.i1, s.i2)))
    for (const auto& v : all_cubes(a2, 0, a2.level - 1 - std::max(s.j1, s.j2))) {
      std::array<int, 4> depths{};
      for (int t = 0; t < 4; ++t) {
        const int room = (t % 2 == 0) ? a1.level - k.level : a2.level - v.level;
        depths[t] = static_cast<int>(rng.below(room + 1));
      }
      s.kernels.add(KernelBlock2P::on_subcubes(
          a1, a2, k, v, d, depths,
          [&](std::size_t, std::size_t, std::size_t, std::size_t) { return random_matrix(rng, d); }));
    }
  return s;
}

// Brute-force double sum over finest cells for A_K on a single-axis field.
DiscreteField averaging_oracle(const KernelBlock& kb, const DiscreteField& f) {
  const GridAxis& ax = f.axis(kb.cube().axis);
  const CellRange r = cube_cells(ax, kb.cube());
  const int d = kb.d();
  DiscreteField out = f.zeros_like();
  const double kmeas = cube_measure(ax, kb.cube());
  for (std::size_t x = 0; x < r.count; ++x)
    for (std::size_t y = 0; y < r.count; ++y) {
      const Matrix& m = kb.value(x, y);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          out[(r.begin + x) * d + a] += m[a * d + b] * f[(r.begin + y) * d + b] * ax.cell_measure() / kmeas;
    }
  return out;
}

// Kernel value of a two-parameter block at local cells.
double kernel2_value(const KernelBlock2P& kb, std::size_t x1, std::size_t x2, std::size_t y1,
                     std::size_t y2) {
  for (const auto& p : kb.pieces())
    if (p.x1.contains(x1) && p.x2.contains(x2) && p.y1.contains(y1) && p.y2.contains(y2))
      return p.matrix[0];
  return NAN;
}

// <S f, g> for a scalar two-parameter shift through its full Haar expansion.
double haar_expansion_pairing(const ShiftSpec2P& s, const DiscreteField& f, const DiscreteField& g) {
  const GridAxis& a1 = s.kernels.axis1;
  const GridAxis& a2 = s.kernels.axis2;
  double total = 0.0;
  for (const auto& [kv, kb] : s.kernels.blocks) {
    const auto& [k, v] = kv;
    const CellRange rk = cube_cells(a1, k), rv = cube_cells(a2, v);
    const double norm = a1.cell_measure() * a1.cell_measure() * a2.cell_measure() * a2.cell_measure() /
                        (cube_measure(a1, k) * cube_measure(a2, v));
    for (const auto& i1 : descendants(a1, k, s.i1))
      for (const auto& j1 : descendants(a2, v, s.j1))
        for (const auto& i2 : descendants(a1, k, s.i2))
          for (const auto& j2 : descendants(a2, v, s.j2)) {
            const HaarIndex hi1{i1, 1}, hj1{j1, 1}, hi2{i2, 1}, hj2{j2, 1};
            const double cf = haar_pairing(haar_pairing(f, hi1), hj1)[0];
            const double cg = haar_pairing(haar_pairing(g, hi2), hj2)[0];
            if (cf == 0.0 && cg == 0.0) continue;
            double a = 0.0;
            for (std::size_t x1 = 0; x1 < rk.count; ++x1)
              for (std::size_t x2 = 0; x2 < rv.count; ++x2) {
                const double hx = haar_value(a1, hi2, rk.begin + x1) * haar_value(a2, hj2, rv.begin + x2);
                if (hx == 0.0) continue;
                for (std::size_t y1 = 0; y1 < rk.count; ++y1)
                  for (std::size_t y2 = 0; y2 < rv.count; ++y2)
                    a += kernel2_value(kb, x1, x2, y1, y2) * hx *
                         haar_value(a1, hi1, rk.begin + y1) * haar_value(a2, hj1, rv.begin + y2);
              }
            total += cf * cg * a * norm;
          }
  }
  return total;
}

}  // namespace

TEST_CASE("averaging operator") {
  GridAxis ax(0, 1, 4);
  Rng rng(31);
  const DyadicCube k{0, 1, {1, 0, 0}};
  auto f = random_field({ax}, LatticeSpec::flat(2, 2.0), rng);
  auto avg = apply_averaging(KernelBlock::constant(ax, k, identity_matrix(2), 2), f);
  auto expect = restrict_to_cube(conditional_expectation(f, 0, 1), k);
  CHECK(max_abs_diff(avg, expect) < 1e-14);
  auto mz = martingale_difference(f, k);
  CHECK(max_abs(apply_averaging(KernelBlock::constant(ax, k, identity_matrix(2), 2), mz)) < 1e-14);
  for (int t = 0; t < 5; ++t) {
    auto kb = KernelBlock::on_subcubes(ax, k, 2, 2, 3, [&](std::size_t, std::size_t) { return random_matrix(rng, 2); });
    CHECK(max_abs_diff(apply_averaging(kb, f), averaging_oracle(kb, f)) < 1e-12);
  }
  CHECK_THROWS_AS(KernelBlock::constant(ax, k, identity_matrix(3), 2), DimensionMismatch);
}

TEST_CASE("kernel pieces must partition the cube product") {
  GridAxis ax(0, 1, 2);
  const DyadicCube k{0, 0, {0, 0, 0}};
  const Matrix one{1.0};
  CHECK_THROWS_AS(KernelBlock::from_pieces(ax, k, 1, {{{0, 4}, {0, 2}, one}}), ConfigError);
  CHECK_THROWS_AS(KernelBlock::from_pieces(ax, k, 1, {{{0, 4}, {0, 4}, one}, {{0, 1}, {0, 1}, one}}),
                  ConfigError);
  CHECK_NOTHROW(KernelBlock::from_pieces(ax, k, 1, {{{0, 4}, {0, 2}, one}, {{0, 4}, {2, 2}, one}}));
}

TEST_CASE("one-parameter shift examples") {
  GridAxis ax(0, 1, 3);
  ShiftSpec1P s;
  s.kernels.axis = ax;
  for (const auto& k : all_cubes(ax, 0, 2)) s.kernels.add(KernelBlock::constant(ax, k, {1.0}, 1));
  Rng rng(32);
  auto f = random_field({ax}, LatticeSpec::scalar(), rng);
  CHECK(max_abs(apply_shift_1p(s, f)) < 1e-14);

  // |K| h_{I1}(y) h_{I2}(x) with K = [0,1), I1 = [0,1/2), I2 = [1/2,1)
  GridAxis a4(0, 1, 4);
  const DyadicCube K{0, 0, {0, 0, 0}};
  const HaarIndex I1{{0, 1, {0, 0, 0}}, 1}, I2{{0, 1, {1, 0, 0}}, 1};
  ShiftSpec1P t;
  t.i1 = 1;
  t.i2 = 1;
  t.kernels.axis = a4;
  t.kernels.add(KernelBlock::on_subcubes(a4, K, 1, 4, 4, [&](std::size_t x, std::size_t y) {
    return Matrix{haar_value(a4, I2, x) * haar_value(a4, I1, y)};
  }));
  CHECK(max_abs_diff(apply_shift_1p(t, haar_function(a4, I1)), haar_function(a4, I2)) < 1e-14);

  // support and cancellation
  auto r = random_shift_1p(a4, 2, 1, 0, rng);
  ShiftSpec1P part = r;
  part.kernels.blocks.clear();
  const DyadicCube k2{0, 1, {1, 0, 0}};
  part.kernels.add(r.kernels.blocks.at(k2));
  auto g = random_field({a4}, LatticeSpec::flat(2, 2.0), rng);
  auto out = apply_shift_1p(part, g);
  CHECK(max_abs_diff(restrict_to_cube(out, k2), out) == 0.0);
  for (double m : integrate(apply_shift_1p(r, g))) CHECK(std::fabs(m) < 1e-13);

  ShiftSpec1P bad = t;
  bad.i1 = 4;
  CHECK_THROWS_AS(apply_shift_1p(bad, haar_function(a4, I1)), LevelError);
}

TEST_CASE("one-parameter shift acts on passive axes") {
  GridAxis a(0, 1, 3), b(1, 2, 1);
  Rng rng(33);
  auto s = random_shift_1p(a, 1, 1, 0, rng);
  auto g = random_field({a}, LatticeSpec::scalar(), rng);
  auto h = random_field({b}, LatticeSpec::scalar(), rng);
  auto out = apply_shift_1p(s, tensor(h, g));
  CHECK(max_abs_diff(out, tensor(h, apply_shift_1p(s, g))) < 1e-13);
}

TEST_CASE("adjoint shift") {
  GridAxis ax(0, 1, 4);
  Rng rng(34);
  for (int i1 = 0; i1 <= 2; ++i1)
    for (int i2 = 0; i2 <= 1; ++i2) {
      auto s = random_shift_1p(ax, 3, i1, i2, rng);
      auto a = adjoint_shift(s);
      CHECK(a.i1 == i2);
      CHECK(a.i2 == i1);
      auto f = random_field({ax}, LatticeSpec::flat(3, 3.0), rng);
      auto g = random_field({ax}, LatticeSpec::flat(3, 1.5), rng);
      const double lhs = dual_pairing(apply_shift_1p(s, f).values(), g.values());
      const double rhs = dual_pairing(f.values(), apply_shift_1p(a, g).values());
      CHECK(std::fabs(lhs - rhs) < 1e-12 * (1 + std::fabs(lhs)));
      auto aa = adjoint_shift(a);
      CHECK(max_abs_diff(apply_shift_1p(aa, f), apply_shift_1p(s, f)) == 0.0);
    }
  // symmetric kernel, equal depths: self-adjoint
  ShiftSpec1P sym;
  sym.i1 = sym.i2 = 1;
  sym.kernels.axis = ax;
  for (const auto& k : all_cubes(ax, 0, 2)) {
    const std::size_t n = cube_cells(ax, k).count;
    std::vector<double> vals(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y <= x; ++y) vals[x * n + y] = vals[y * n + x] = rng.normal();
    sym.kernels.add(KernelBlock::on_subcubes(ax, k, 1, ax.level - k.level, ax.level - k.level,
                                             [&](std::size_t x, std::size_t y) { return Matrix{vals[x * n + y]}; }));
  }
  auto f = random_field({ax}, LatticeSpec::scalar(), rng);
  CHECK(max_abs_diff(apply_shift_1p(adjoint_shift(sym), f), apply_shift_1p(sym, f)) < 1e-15);
}

TEST_CASE("scalar shifts with bounded kernels contract L2") {
  GridAxis ax(0, 1, 5);
  Rng rng(35);
  for (int i1 = 0; i1 <= 2; ++i1)
    for (int i2 = 0; i2 <= 2; ++i2) {
      auto s = random_shift_1p(ax, 1, i1, i2, rng);
      Eigen::MatrixXd m = shift_map(s, LatticeSpec::scalar()).assemble();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      CHECK(svd.singularValues()(0) <= 1.0 + 1e-9);
    }
}

TEST_CASE("two-parameter shift examples") {
  GridAxis a1(0, 1, 3), a2(1, 1, 3);
  Rng rng(36);
  ShiftSpec2P z;
  z.kernels.axis1 = a1;
  z.kernels.axis2 = a2;
  for (const auto& k : all_cubes(a1, 0, 2))
    for (const auto& v : all_cubes(a2, 0, 2))
      z.kernels.add(KernelBlock2P::tensor(a1, a2, KernelBlock::constant(a1, k, {1.0}, 1),
                                          KernelBlock::constant(a2, v, {1.0}, 1), 1));
  auto f = random_field({a1, a2}, LatticeSpec::scalar(), rng);
  CHECK(max_abs(apply_shift_2p(z, f)) < 1e-13);
  CHECK(max_abs(nest_biparameter(z, f)) < 1e-13);

  // tensor kernels on tensor input
  auto s1 = random_shift_1p(a1, 1, 1, 0, rng);
  auto s2 = random_shift_1p(a2, 1, 0, 1, rng);
  ShiftSpec2P t;
  t.i1 = 1;
  t.i2 = 0;
  t.j1 = 0;
  t.j2 = 1;
  t.kernels.axis1 = a1;
  t.kernels.axis2 = a2;
  for (const auto& [k, ka] : s1.kernels.blocks)
    for (const auto& [v, kb] : s2.kernels.blocks) t.kernels.add(KernelBlock2P::tensor(a1, a2, ka, kb, 1));
  auto g = random_field({a1}, LatticeSpec::scalar(), rng);
  auto h = random_field({a2}, LatticeSpec::scalar(), rng);
  auto expect = tensor(apply_shift_1p(s1, g), apply_shift_1p(s2, h));
  CHECK(max_abs_diff(apply_shift_2p(t, tensor(g, h)), expect) < 1e-13);
  CHECK(max_abs_diff(nest_biparameter(t, tensor(g, h)), expect) < 1e-13);
}

TEST_CASE("two-parameter shift matches its Haar expansion") {
  GridAxis a1(0, 1, 3), a2(1, 1, 2);
  Rng rng(37);
  for (auto ij : {std::array<int, 4>{0, 0, 0, 0}, std::array<int, 4>{1, 0, 0, 1},
                  std::array<int, 4>{2, 1, 1, 0}}) {
    auto s = random_shift_2p(a1, a2, 1, ij, rng);
    auto f = random_field({a1, a2}, LatticeSpec::scalar(), rng);
    auto g = random_field({a1, a2}, LatticeSpec::scalar(), rng);
    const double direct = inner_product(apply_shift_2p(s, f), g);
    CHECK(direct == doctest::Approx(haar_expansion_pairing(s, f, g)).epsilon(1e-11));
  }
}

TEST_CASE("nested and compiled two-parameter evaluation agree with the direct sum") {
  GridAxis a1(0, 1, 3), a2(1, 1, 3);
  Rng rng(38);
  for (int i1 = 0; i1 <= 2; ++i1)
    for (int i2 = 0; i2 <= 2; ++i2)
      for (int j1 = 0; j1 <= 2; j1 += 2)
        for (int j2 = 0; j2 <= 1; ++j2) {
          const int d = (i1 + j2) % 2 + 1;
          auto s = random_shift_2p(a1, a2, d, {i1, i2, j1, j2}, rng);
          auto f = random_field({a1, a2}, LatticeSpec::flat(d, 2.0), rng);
          auto direct = apply_shift_2p(s, f);
          const double scale = 1 + max_abs(direct);
          CHECK(max_abs_diff(nest_biparameter(s, f), direct) < 1e-11 * scale);
          CHECK(max_abs_diff(CompiledShift2P(s).apply(f), direct) < 1e-11 * scale);
          auto g = random_field({a1, a2}, f.lattice(), rng);
          auto adj = adjoint_shift(s);
          CHECK(dual_pairing(direct.values(), g.values()) ==
                doctest::Approx(dual_pairing(f.values(), apply_shift_2p(adj, g).values())).epsilon(1e-12));
          for (double m : integrate(direct)) CHECK(std::fabs(m) < 1e-12 * scale);
        }
  GridAxis b1(0, 2, 2), b2(1, 1, 2);
  auto s = random_shift_2p(b1, b2, 2, {0, 1, 0, 0}, rng);
  auto f = random_field({b1, b2}, LatticeSpec::flat(2, 2.0), rng);
  auto direct = apply_shift_2p(s, f);
  CHECK(max_abs_diff(nest_biparameter(s, f), direct) < 1e-12);
  CHECK(max_abs_diff(CompiledShift2P(s).apply(f), direct) < 1e-12);
}

TEST_CASE("model operators") {
  GridAxis ax(0, 1, 4), other(1, 1, 2);
  Rng rng(39);
  const HaarIndex in{{0, 2, {1, 0, 0}}, 1}, out{{0, 1, {1, 0, 0}}, 1};
  ModelOperatorSpec m;
  m.axis = ax;
  m.i1 = 2;
  m.i2 = 1;
  m.add(in, out, {identity_matrix(2)});
  CHECK(m.budget({in, out}) == doctest::Approx(1.0 / std::sqrt(0.25 * 0.5)));
  auto g = random_field({other}, LatticeSpec::flat(2, 2.0), rng);
  auto f = tensor(haar_function(ax, in), g);
  CHECK(max_abs_diff(apply_model(m, f), tensor(haar_function(ax, out), g)) < 1e-14);
  auto orth = tensor(haar_function(ax, {{0, 2, {2, 0, 0}}, 1}), g);
  CHECK(max_abs(apply_model(m, orth)) < 1e-15);

  auto sh = model_to_shift(m, 2);
  const auto& kb = sh.kernels.blocks.begin()->second;
  const double mag = m.budget({in, out});
  for (std::size_t x = 0; x < kb.cells(); ++x)
    for (std::size_t y = 0; y < kb.cells(); ++y) {
      const double v = kb.value(x, y)[0];
      CHECK((v == 0.0 || std::fabs(std::fabs(v) - mag) < 1e-14));
      CHECK(kb.value(x, y)[1] == 0.0);
    }
  CHECK_THROWS_AS(m.add(in, {{0, 2, {0, 0, 0}}, 1}, {identity_matrix(2)}), ConfigError);

  ModelOperatorSpec empty;
  empty.axis = ax;
  CHECK(model_to_shift(empty, 1).kernels.blocks.empty());

  for (int t = 0; t < 20; ++t) {
    ModelOperatorSpec r;
    r.axis = ax;
    r.i1 = static_cast<int>(rng.below(3));
    r.i2 = static_cast<int>(rng.below(3));
    for (const auto& k : all_cubes(ax, 0, ax.level - 1 - std::max(r.i1, r.i2)))
      for (const auto& a : descendants(ax, k, r.i1))
        for (const auto& b : descendants(ax, k, r.i2))
          if (rng.uniform() < 0.5) r.add({a, 1}, {b, 1}, {random_matrix(rng, 2)});
    auto h = random_field({ax}, LatticeSpec::flat(2, 2.0), rng);
    CHECK(max_abs_diff(apply_shift_1p(model_to_shift(r, 2), h), apply_model(r, h)) < 1e-12);
  }

  ModelOperatorSpec op;
  op.axis = ax;
  op.add({{0, 0, {0, 0, 0}}, 1}, {{0, 0, {0, 0, 0}}, 1},
         {FieldOperator([](const DiscreteField& c) { return 2.0 * c; })});
  CHECK_THROWS_AS(model_to_shift(op, 1), ConfigError);
}
