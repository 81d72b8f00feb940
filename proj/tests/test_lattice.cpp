#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadshift/common.hpp"
#include "dyadshift/lattice.hpp"

using namespace dyadshift;

namespace {

std::vector<LatticeSpec> tested_specs() {
  return {LatticeSpec::flat(3, 2.0), LatticeSpec::flat(4, 1.5), LatticeSpec::flat(2, 3.0),
          LatticeSpec::flat(4, 4.0), LatticeSpec::nested(2, 3.0, LatticeSpec::flat(2, 2.0)),
          LatticeSpec::nested(2, 1.5, LatticeSpec::flat(2, 4.0))};
}

std::vector<double> draw(Rng& rng, int d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  return v;
}

// Maximizes <v, w> / |w|_{E'} by gradient ascent with backtracking.
double dual_maximum(const LatticeSpec& spec, const std::vector<double>& v, Rng& rng) {
  const LatticeSpec dual = koethe_dual(spec);
  auto objective = [&](const std::vector<double>& w) {
    return dual_pairing(v, w) / lattice_norm(dual, w);
  };
  double best = 0.0;
  for (int start = 0; start < 4; ++start) {
    std::vector<double> w = draw(rng, spec.dim());
    double val = objective(w);
    double step = 0.1;
    for (int it = 0; it < 4000 && step > 1e-14; ++it) {
      std::vector<double> g(w.size());
      const double h = 1e-7;
      for (std::size_t i = 0; i < w.size(); ++i) {
        auto wp = w, wm = w;
        wp[i] += h;
        wm[i] -= h;
        g[i] = (objective(wp) - objective(wm)) / (2 * h);
      }
      auto trial = w;
      for (std::size_t i = 0; i < w.size(); ++i) trial[i] += step * g[i];
      const double tv = objective(trial);
      if (tv > val) {
        w = trial;
        val = tv;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

TEST_CASE("lattice norm examples") {
  const std::vector<double> v34{3, 4};
  CHECK(lattice_norm(LatticeSpec::flat(2, 2.0), v34) == doctest::Approx(5.0).epsilon(1e-15));
  const std::vector<double> ones{1, 1};
  CHECK(lp_norm(ones, 1.0) == 2.0);
  CHECK(lattice_norm(LatticeSpec::flat(2, 3.0), ones) ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(lattice_norm(LatticeSpec::flat(3, 2.0), ones), DimensionMismatch);
}

TEST_CASE("exponents outside the supported range are rejected") {
  CHECK_THROWS_AS(LatticeSpec::flat(2, 1.0), ConfigError);
  CHECK_THROWS_AS(LatticeSpec::flat(2, 1000.0), ConfigError);
  CHECK_THROWS_AS(LatticeSpec::flat(0, 2.0), ConfigError);
}

TEST_CASE("nested lattice norm iterates block norms") {
  const auto spec = LatticeSpec::nested(2, 3.0, LatticeSpec::flat(2, 2.0));
  CHECK(spec.dim() == 4);
  const std::vector<double> v{3, 4, 0, 1};
  const double expect = std::cbrt(125.0 + 1.0);
  CHECK(lattice_norm(spec, v) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("koethe dual conjugates every level") {
  CHECK(koethe_dual(LatticeSpec::flat(3, 2.0)).exponent() == 2.0);
  CHECK(koethe_dual(LatticeSpec::flat(3, 3.0)).exponent() == doctest::Approx(1.5));
  const auto d = koethe_dual(LatticeSpec::nested(2, 3.0, LatticeSpec::flat(2, 2.0)));
  CHECK(d.exponent() == doctest::Approx(1.5));
  CHECK(d.inner().exponent() == doctest::Approx(2.0));
  CHECK(d.dim() == 4);
  CHECK(koethe_dual(koethe_dual(LatticeSpec::flat(2, 3.0))).exponent() ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("dual pairing examples and Hoelder") {
  CHECK(dual_pairing(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(dual_pairing(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 11.0);
  CHECK_THROWS_AS(dual_pairing(std::vector<double>{1}, std::vector<double>{1, 2}),
                  DimensionMismatch);
  Rng rng(11);
  for (const auto& spec : tested_specs()) {
    const auto dual = koethe_dual(spec);
    for (int t = 0; t < 1000; ++t) {
      auto v = draw(rng, spec.dim()), w = draw(rng, spec.dim());
      CHECK(std::fabs(dual_pairing(v, w)) <=
            lattice_norm(spec, v) * lattice_norm(dual, w) * (1 + 1e-12));
    }
  }
}

TEST_CASE("norm axioms on random vectors") {
  Rng rng(12);
  for (const auto& spec : tested_specs()) {
    for (int t = 0; t < 1000; ++t) {
      auto v = draw(rng, spec.dim()), w = draw(rng, spec.dim());
      const double c = rng.normal();
      auto cv = v;
      for (double& x : cv) x *= c;
      CHECK(lattice_norm(spec, cv) ==
            doctest::Approx(std::fabs(c) * lattice_norm(spec, v)).epsilon(1e-12));
      auto s = v;
      for (int i = 0; i < spec.dim(); ++i) s[i] += w[i];
      CHECK(lattice_norm(spec, s) <= lattice_norm(spec, v) + lattice_norm(spec, w) + 1e-12);
      // monotonicity: shrink |v| componentwise
      auto smaller = v;
      for (double& x : smaller) x *= rng.uniform();
      CHECK(lattice_norm(spec, smaller) <= lattice_norm(spec, v) + 1e-15);
    }
  }
}

TEST_CASE("norm equals the supremum of dual pairings") {
  Rng rng(13);
  for (const auto& spec : tested_specs()) {
    for (int t = 0; t < 3; ++t) {
      auto v = draw(rng, spec.dim());
      CHECK(dual_maximum(spec, v, rng) ==
            doctest::Approx(lattice_norm(spec, v)).epsilon(1e-6));
    }
  }
}

TEST_CASE("lattice vector helpers") {
  LatticeVector v({-1, 2}, LatticeSpec::flat(2, 2.0));
  CHECK(v.abs().values == std::vector<double>{1, 2});
  CHECK(v.power(2).values == std::vector<double>{1, 4});
  CHECK(v.norm() == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(LatticeVector({1}, LatticeSpec::flat(2, 2.0)), DimensionMismatch);
}
