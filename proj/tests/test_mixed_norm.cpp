#include <doctest.h>

#include <cmath>

#include "dyadshift/mixed_norm.hpp"

using namespace dyadshift;

namespace {

// Direct iterated sum for two axes, outer axis first in the order.
double two_axis_oracle(const DiscreteField& f, int outer, int inner, double q, double p) {
  const GridAxis& ao = f.axis(outer);
  const GridAxis& ai = f.axis(inner);
  const bool outer_first = f.axis_position(outer) == 0;
  const std::size_t d = f.lattice_dim();
  double total = 0.0;
  for (std::size_t a = 0; a < ao.cells(); ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < ai.cells(); ++b) {
      const std::size_t pt = outer_first ? a * ai.cells() + b : b * ao.cells() + a;
      std::vector<double> v(f.values().begin() + pt * d, f.values().begin() + (pt + 1) * d);
      s += std::pow(lattice_norm(f.lattice(), v), p) * ai.cell_measure();
    }
    total += std::pow(s, q / p) * ao.cell_measure();
  }
  return std::pow(total, 1.0 / q);
}

}  // namespace

TEST_CASE("mixed norm examples") {
  GridAxis a(0, 1, 3), b(1, 1, 2);
  const auto lat = LatticeSpec::flat(2, 3.0);
  const std::vector<double> e{1.0, -2.0};
  auto c = DiscreteField::constant({a, b}, lat, e);
  for (double p : {1.5, 2.0, 3.0})
    for (double q : {1.5, 2.0, 3.0}) {
      MixedNormSpec s{{0, 1}, {q, p}, lat};
      CHECK(mixed_norm(c, s) == doctest::Approx(lattice_norm(lat, e)).epsilon(1e-13));
    }
  GridAxis a1(0, 1, 1), b1(1, 1, 1);
  DiscreteField one({a1, b1}, LatticeSpec::scalar());
  one[0] = 1.0;
  CHECK(mixed_norm(one, MixedNormSpec::uniform({0, 1}, 2.0, LatticeSpec::scalar())) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(mixed_norm(one, MixedNormSpec::uniform({0, 2}, 2.0, LatticeSpec::scalar())),
                  AxisError);
  CHECK_THROWS_AS(MixedNormSpec::uniform({0, 1}, 1.0, LatticeSpec::scalar()), ConfigError);
}

TEST_CASE("mixed norm matches direct iterated sums in both orders") {
  GridAxis a(0, 1, 3), b(1, 2, 1);
  Rng rng(21);
  const auto lat = LatticeSpec::nested(2, 1.5, LatticeSpec::flat(2, 3.0));
  auto f = random_field({a, b}, lat, rng);
  for (auto [q, p] : {std::pair{3.0, 1.5}, std::pair{1.5, 2.0}}) {
    CHECK(mixed_norm(f, {{0, 1}, {q, p}, lat}) ==
          doctest::Approx(two_axis_oracle(f, 0, 1, q, p)).epsilon(1e-12));
    CHECK(mixed_norm(f, {{1, 0}, {q, p}, lat}) ==
          doctest::Approx(two_axis_oracle(f, 1, 0, q, p)).epsilon(1e-12));
  }
}

TEST_CASE("axis order matters except for tensor products") {
  GridAxis a(0, 1, 2), b(1, 1, 2);
  const auto lat = LatticeSpec::scalar();
  DiscreteField f({a, b}, lat, {1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 5});
  const double n1 = mixed_norm(f, {{0, 1}, {3.0, 1.5}, lat});
  const double n2 = mixed_norm(f, {{1, 0}, {3.0, 1.5}, lat});
  CHECK(std::fabs(n1 - n2) > 1e-3);
  Rng rng(22);
  auto g = random_field({a}, lat, rng), h = random_field({b}, lat, rng);
  auto t = tensor(g, h);
  for (auto [q, p] : {std::pair{3.0, 1.5}, std::pair{2.0, 2.0}, std::pair{1.5, 4.0}}) {
    const double ng_q = mixed_norm(g, {{0}, {q}, lat});
    const double nh_p = mixed_norm(h, {{1}, {p}, lat});
    CHECK(mixed_norm(t, {{0, 1}, {q, p}, lat}) == doctest::Approx(ng_q * nh_p).epsilon(1e-12));
    const double nh_q = mixed_norm(h, {{1}, {q}, lat});
    const double ng_p = mixed_norm(g, {{0}, {p}, lat});
    CHECK(mixed_norm(t, {{1, 0}, {q, p}, lat}) == doctest::Approx(nh_q * ng_p).epsilon(1e-12));
  }
}

TEST_CASE("gradient is the norming dual vector") {
  GridAxis a(0, 1, 2), b(1, 1, 3);
  Rng rng(23);
  const auto lat = LatticeSpec::flat(3, 4.0);
  for (auto order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
    MixedNormSpec spec{order, {1.5, 3.0}, lat};
    NormStructure ns(spec, {a, b});
    NormStructure dual = ns.dual();
    for (int t = 0; t < 20; ++t) {
      auto f = random_field({a, b}, lat, rng);
      double val = 0.0;
      auto g = ns.gradient(f.values(), &val);
      CHECK(val == doctest::Approx(ns.value(f.values())).epsilon(1e-14));
      CHECK(dual_pairing(g, f.values()) == doctest::Approx(val).epsilon(1e-12));
      CHECK(dual.value(g) == doctest::Approx(1.0).epsilon(1e-12));
      // finite differences in a random direction
      auto dir = random_field({a, b}, lat, rng);
      const double h = 1e-6;
      auto fp = f, fm = f;
      fp.axpy(h, dir);
      fm.axpy(-h, dir);
      const double fd = (ns.value(fp.values()) - ns.value(fm.values())) / (2 * h);
      CHECK(fd == doctest::Approx(dual_pairing(g, dir.values())).epsilon(1e-6));
      // dual of dual
      CHECK(dual.dual().value(f.values()) == doctest::Approx(val).epsilon(1e-12));
    }
  }
}

TEST_CASE("Hilbertian structures report a uniform weight") {
  GridAxis a(0, 1, 2), b(1, 1, 3);
  NormStructure ns(MixedNormSpec::uniform({0, 1}, 2.0, LatticeSpec::flat(2, 2.0)), {a, b});
  CHECK(ns.hilbertian());
  Rng rng(24);
  auto f = random_field({a, b}, LatticeSpec::flat(2, 2.0), rng);
  double s = 0;
  for (double v : f.values()) s += v * v;
  CHECK(ns.value(f.values()) == doctest::Approx(std::sqrt(ns.uniform_weight() * s)).epsilon(1e-13));
}
