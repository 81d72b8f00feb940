#include <doctest.h>

#include <cmath>
#include <set>

#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"

using namespace dyadshift;

namespace {

const DyadicCube kTop0{0, 0, {0, 0, 0}};

DiscreteField indicator(const GridAxis& ax, const DyadicCube& q) {
  std::vector<double> v(ax.cells(), 0.0);
  const CellRange r = cube_cells(ax, q);
  for (std::size_t c = r.begin; c < r.end(); ++c) v[c] = 1.0;
  return axis_function(ax, v);
}

double bmo_oracle(const DiscreteField& b) {
  const GridAxis& ax = b.axes()[0];
  double best = 0.0;
  for (const auto& q : all_cubes(ax, 0, ax.level)) {
    const CellRange r = cube_cells(ax, q);
    double mean = 0.0;
    for (std::size_t c = r.begin; c < r.end(); ++c) mean += b[c];
    mean /= static_cast<double>(r.count);
    double dev = 0.0;
    for (std::size_t c = r.begin; c < r.end(); ++c) dev += std::fabs(b[c] - mean);
    best = std::max(best, dev / static_cast<double>(r.count));
  }
  return best;
}

// sup over cubes containing each point, by enumeration.
DiscreteField maximal_oracle(const DiscreteField& f) {
  const GridAxis& ax = f.axes()[0];
  const int d = f.lattice_dim();
  DiscreteField m = f.zeros_like();
  for (std::size_t x = 0; x < ax.cells(); ++x)
    for (int l = 0; l <= ax.level; ++l) {
      const CellRange r = cube_cells(ax, cube_of_cell(ax, x, l));
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t c = r.begin; c < r.end(); ++c) s += std::fabs(f[c * d + k]);
        m[x * d + k] = std::max(m[x * d + k], s / static_cast<double>(r.count));
      }
    }
  return m;
}

LinearMap matrix_map(const GridAxis& ax, Eigen::MatrixXd m) {
  FieldShape s{{ax}, LatticeSpec::scalar()};
  return LinearMap::dense(s, s, std::move(m));
}

}  // namespace

TEST_CASE("dyadic BMO norm") {
  GridAxis ax(0, 1, 4);
  CHECK(bmo_norm(haar_function(ax, {kTop0, 1})) == doctest::Approx(1.0));
  CHECK(bmo_norm(DiscreteField::constant({ax}, LatticeSpec::scalar(), std::vector<double>{3.0})) == 0.0);
  CHECK(bmo_norm(indicator(ax, {0, 1, {0, 0, 0}})) == doctest::Approx(0.5));
  Rng rng(50);
  for (int dim = 1; dim <= 2; ++dim) {
    GridAxis g(0, dim, dim == 1 ? 5 : 3);
    for (int t = 0; t < 20; ++t) {
      auto b = random_field({g}, LatticeSpec::scalar(), rng);
      const double m = bmo_norm(b);
      CHECK(m == doctest::Approx(bmo_oracle(b)).epsilon(1e-13));
      auto shifted = b;
      for (double& v : shifted.values()) v += 7.25;
      CHECK(bmo_norm(shifted) == doctest::Approx(m).epsilon(1e-13));
      CHECK(bmo_norm(-3.0 * b) == doctest::Approx(3.0 * m).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(bmo_norm(random_field({ax}, LatticeSpec::flat(2, 2.0), rng)), DimensionMismatch);
}

TEST_CASE("square function") {
  GridAxis a1(0, 1, 3), a2(1, 1, 2);
  const HaarIndex i0{{0, 1, {1, 0, 0}}, 1}, j0{{1, 1, {0, 0, 0}}, 1};
  Symbol2P one{a1, a2, {}};
  one.add(i0, j0, -2.0);
  auto s = square_function(one);
  const double v = 2.0 / std::sqrt(0.5 * 0.5);
  for (std::size_t x = 0; x < a1.cells(); ++x)
    for (std::size_t y = 0; y < a2.cells(); ++y) {
      const bool in = cube_cells(a1, i0.cube).contains(x) && cube_cells(a2, j0.cube).contains(y);
      CHECK(s[x * a2.cells() + y] == doctest::Approx(in ? v : 0.0));
    }
  Rng rng(51);
  for (int t = 0; t < 10; ++t) {
    auto a = random_symbol_2p(a1, a2, 1.0, 100 + t, {0.5, -1});
    auto sa = square_function(a);
    for (std::size_t x = 0; x < a1.cells(); ++x)
      for (std::size_t y = 0; y < a2.cells(); ++y) {
        double acc = 0.0;
        for (const auto& [key, c] : a.coefficients)
          if (cube_of_cell(a1, x, key.first.cube.level) == key.first.cube &&
              cube_of_cell(a2, y, key.second.cube.level) == key.second.cube)
            acc += c * c / (cube_measure(a1, key.first.cube) * cube_measure(a2, key.second.cube));
        CHECK(sa[x * a2.cells() + y] == doctest::Approx(std::sqrt(acc)).epsilon(1e-13));
      }
  }
}

TEST_CASE("product BMO estimate and candidate family") {
  GridAxis a1(0, 1, 3), a2(1, 1, 3);
  const HaarIndex i0{{0, 1, {1, 0, 0}}, 1}, j0{{1, 2, {1, 0, 0}}, 1};
  Symbol2P one{a1, a2, {}};
  one.add(i0, j0, 1.0);
  auto fam = default_omega_family(one);
  CHECK_NOTHROW(fam.check());
  const CellSet r0 = fam.rectangle(i0.cube, j0.cube);
  CHECK(std::any_of(fam.members.begin(), fam.members.end(), [&](const CellSet& s) { return s.mask == r0.mask; }));
  CHECK(product_bmo_estimate(one, fam) == doctest::Approx(1.0 / std::sqrt(r0.measure)));
  CHECK(product_bmo_estimate(Symbol2P{a1, a2, {}}) == 0.0);

  Symbol2P two{a1, a2, {}};
  const HaarIndex i1{{0, 1, {0, 0, 0}}, 1}, j1{{1, 2, {3, 0, 0}}, 1};
  two.add(i0, j0, 1.0);
  two.add(i1, j1, 1.0);
  auto fam2 = default_omega_family(two);
  CellSet u = fam2.rectangle(i0.cube, j0.cube);
  const CellSet other = fam2.rectangle(i1.cube, j1.cube);
  for (std::size_t w = 0; w < u.mask.size(); ++w) u.mask[w] |= other.mask[w];
  CHECK(std::any_of(fam2.members.begin(), fam2.members.end(), [&](const CellSet& s) { return s.mask == u.mask; }));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = random_symbol_2p(a1, a2, 1.0, seed, {0.2, -1});
    auto f = default_omega_family(s);
    std::set<std::pair<DyadicCube, DyadicCube>> support;
    for (const auto& [k, c] : s.coefficients) support.insert({k.first.cube, k.second.cube});
    const std::size_t rects = support.size();
    const std::size_t values = [&] {
      auto sq = square_function(s).values();
      std::sort(sq.begin(), sq.end());
      return static_cast<std::size_t>(std::unique(sq.begin(), sq.end()) - sq.begin());
    }();
    const std::size_t singles = all_cubes(a1, 0, a1.level - 1).size() * all_cubes(a2, 0, a2.level - 1).size();
    CHECK(f.members.size() <= singles + rects + values + (rects + values) * (rects + values));
    // monotone under enlargement, dominates every single rectangle
    OmegaCandidateFamily half{a1, a2, {}};
    for (std::size_t k = 0; k < f.members.size(); k += 2) half.add(f.members[k]);
    const double full = product_bmo_estimate(s, f);
    CHECK(product_bmo_estimate(s, half) <= full + 1e-15);
    for (const auto& [k, c] : s.coefficients) {
      const CellSet r = f.rectangle(k.first.cube, k.second.cube);
      double sum = 0.0;
      for (const auto& [k2, c2] : s.coefficients)
        if (r.contains(f.rectangle(k2.first.cube, k2.second.cube))) sum += c2 * c2;
      CHECK(full >= std::sqrt(sum / r.measure) - 1e-12);
    }
  }
  OmegaCandidateFamily bad{a1, a2, {}};
  bad.add(CellSet{std::vector<std::uint64_t>(1, 0), 0.0});
  CHECK_THROWS_AS(bad.check(), ConfigError);
}

TEST_CASE("key estimate") {
  GridAxis a1(0, 1, 3), a2(1, 1, 3);
  const HaarIndex i0{{0, 2, {1, 0, 0}}, 1}, j0{{1, 1, {1, 0, 0}}, 1};
  Symbol2P l{a1, a2, {}}, a{a1, a2, {}};
  l.add(i0, j0, 1.0);
  a.add(i0, j0, 1.0);
  const auto k = key_estimate_ratio(l, a);
  CHECK(k.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(key_estimate_ratio(l, Symbol2P{a1, a2, {}}).ratio == 0.0);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto lam = random_symbol_2p(a1, a2, 1.0, seed, {0.4, -1});
    auto aa = random_symbol_2p(a1, a2, 1.0, seed + 1000, {0.4, -1});
    const auto r = key_estimate_ratio(lam, aa);
    CHECK(std::isfinite(r.ratio));
    CHECK(!r.degenerate);
  }
}

TEST_CASE("maximal functions") {
  GridAxis ax(0, 1, 3);
  auto m = maximal_1p(indicator(ax, {0, 1, {0, 0, 0}}), 0);
  for (std::size_t c = 0; c < ax.cells(); ++c) CHECK(m[c] == doctest::Approx(c < 4 ? 1.0 : 0.5));
  auto cst = DiscreteField::constant({ax}, LatticeSpec::flat(2, 2.0), std::vector<double>{-2.0, 3.0});
  CHECK(max_abs_diff(maximal_1p(cst, 0), abs(cst)) < 1e-15);

  Rng rng(52);
  GridAxis a1(0, 1, 3), a2(1, 2, 2);
  for (int t = 0; t < 20; ++t) {
    auto f = random_field({ax}, LatticeSpec::flat(2, 2.0), rng);
    auto g = random_field({ax}, LatticeSpec::flat(2, 2.0), rng);
    auto mf = maximal_1p(f, 0);
    CHECK(max_abs_diff(mf, maximal_oracle(f)) < 1e-14);
    auto msum = maximal_1p(f + g, 0), mg = maximal_1p(g, 0), mmf = maximal_1p(mf, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(msum[i] <= mf[i] + mg[i] + 1e-14);
      CHECK(mmf[i] >= mf[i] - 1e-14);
    }
    CHECK(max_abs_diff(maximal_1p(2.5 * f, 0), 2.5 * mf) < 1e-13);

    auto h = random_field({a1, a2}, LatticeSpec::scalar(), rng);
    auto strong = strong_maximal(h, 0, 1);
    auto iterated = maximal_1p(maximal_1p(h, 0), 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
      CHECK(strong[i] <= iterated[i] + 1e-13);
      CHECK(strong[i] >= std::fabs(h[i]) - 1e-15);
    }
    auto m0 = maximal_1p(h, 0), m1 = maximal_1p(h, 1);
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(strong[i] >= std::max(m0[i], m1[i]) - 1e-14);
  }
}

TEST_CASE("Fefferman-Stein ratio") {
  GridAxis a1(0, 1, 3), a2(1, 1, 3);
  auto cst = DiscreteField::constant({a1, a2}, LatticeSpec::scalar(), std::vector<double>{2.0});
  const auto spec = MixedNormSpec::uniform({0, 1}, 3.0, LatticeSpec::scalar());
  CHECK(fefferman_stein_ratio({cst}, 2.0, spec, MaximalKind::one_parameter) == doctest::Approx(1.0));
  CHECK(fefferman_stein_ratio({cst}, 2.0, spec, MaximalKind::strong) == doctest::Approx(1.0));
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    std::vector<DiscreteField> fs;
    for (int j = 0; j < 3; ++j) fs.push_back(random_field({a1, a2}, LatticeSpec::scalar(), rng));
    MixedNormSpec s{{1, 0}, {1.5, 3.0}, LatticeSpec::scalar()};
    CHECK(fefferman_stein_ratio(fs, 1.5, s, MaximalKind::one_parameter) >= 1.0);
    CHECK(fefferman_stein_ratio(fs, 3.0, s, MaximalKind::strong) >= 1.0);
  }
  CHECK_THROWS_AS(fefferman_stein_ratio({cst.zeros_like()}, 2.0, spec, MaximalKind::strong), ConfigError);
}

TEST_CASE("operator norms") {
  GridAxis ax(0, 1, 1), big(0, 1, 4);
  const auto l2 = MixedNormSpec::uniform({0}, 2.0, LatticeSpec::scalar());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  auto rep = operator_norm(matrix_map(ax, d), l2, l2);
  CHECK(rep.method == NormMethod::exact_svd);
  CHECK(!rep.lower_bound);
  CHECK(rep.estimate == doctest::Approx(3.0).epsilon(1e-12));
  const auto l3 = MixedNormSpec::uniform({0}, 3.0, LatticeSpec::scalar());
  auto s3 = operator_norm(matrix_map(ax, d), l3, l3);
  CHECK(s3.method == NormMethod::ascent_search);
  CHECK(s3.lower_bound);
  CHECK(s3.restarts >= 20);
  CHECK(s3.estimate == doctest::Approx(3.0).epsilon(1e-9));

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(16, 16);
  CHECK(operator_norm(matrix_map(big, id), l2, l2).estimate == doctest::Approx(1.0).epsilon(1e-12));
  const auto p15 = MixedNormSpec::uniform({0}, 1.5, LatticeSpec::scalar());
  CHECK(operator_norm(matrix_map(big, id), p15, p15).estimate >= 1.0 - 1e-6);

  Rng rng(54);
  Eigen::VectorXd u(16), v(16);
  for (int i = 0; i < 16; ++i) {
    u(i) = rng.normal();
    v(i) = rng.normal();
  }
  const double cm = big.cell_measure();
  const Eigen::MatrixXd rank_one = v * u.transpose() * cm;
  const double expect = std::sqrt(u.squaredNorm() * cm) * std::sqrt(v.squaredNorm() * cm);
  CHECK(operator_norm(matrix_map(big, rank_one), l2, l2).estimate == doctest::Approx(expect).epsilon(1e-10));

  // conditional expectations contract every L^p with norm 1
  auto e2 = LinearMap::from_fields(
      {{big}, LatticeSpec::scalar()}, {{big}, LatticeSpec::scalar()},
      [](const DiscreteField& f) { return conditional_expectation(f, 0, 2); },
      [](const DiscreteField& f) { return conditional_expectation(f, 0, 2); });
  for (const auto& s : {p15, l3}) {
    const double e = operator_norm(e2, s, s).estimate;
    CHECK(e <= 1.0 + 1e-9);
    CHECK(e >= 1.0 - 1e-6);
  }
  for (int t = 0; t < 5; ++t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(16, 16);
    const auto map = matrix_map(big, m);
    const double exact = operator_norm(map, l2, l2, NormMethod::exact_svd).estimate;
    const double search = operator_norm(map, l2, l2, NormMethod::ascent_search).estimate;
    CHECK(search <= exact * (1 + 1e-12));
    CHECK(search >= exact * (1 - 1e-6));
  }
  CHECK_THROWS_AS(operator_norm(matrix_map(ax, d), l3, l3, NormMethod::exact_svd), ConfigError);
}
