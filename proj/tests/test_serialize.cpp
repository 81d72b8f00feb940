#include <doctest.h>

#include "dyadshift/generators.hpp"
#include "dyadshift/serialize.hpp"

using namespace dyadshift;

namespace {

// Through text, as a fixture file would be.
io::json reparse(const io::json& j) { return io::json::parse(j.dump()); }

}  // namespace

TEST_CASE("fields round-trip bit-exactly") {
  const std::vector<GridAxis> axes{GridAxis(0, 1, 3), GridAxis(1, 2, 2)};
  const LatticeSpec lat = LatticeSpec::nested(2, 1.5, LatticeSpec::flat(3, 3.0));
  Rng rng(5);
  const DiscreteField f = random_field(axes, lat, rng);
  const DiscreteField g = io::field_from_json(reparse(io::to_json(f)));
  CHECK(g.same_shape(f));
  CHECK(g.lattice() == lat);
  CHECK(g.values() == f.values());
}

TEST_CASE("malformed documents raise ConfigError") {
  CHECK_THROWS_AS(io::field_from_json(io::json{{"axes", 3}}), ConfigError);
  CHECK_THROWS_AS(io::lattice_from_json(io::json{{"exponents", {2.0}}, {"sizes", {2, 2}}}), ConfigError);
  CHECK_THROWS_AS(io::cube_from_json(io::json::array()), ConfigError);
}

TEST_CASE("one-parameter kernel fixtures round-trip") {
  const GridAxis ax(0, 1, 4);
  const ShiftSpec1P spec = random_shift_1p(ax, 2, 1, 0, 17);
  const ShiftSpec1P back = io::shift_1p_from_json(reparse(io::to_json(spec)));
  Rng rng(2);
  const DiscreteField f = random_field({ax}, LatticeSpec::flat(2, 2.0), rng);
  CHECK(apply_shift_1p(back, f).values() == apply_shift_1p(spec, f).values());
}

TEST_CASE("two-parameter kernel fixtures round-trip") {
  const GridAxis a1(0, 1, 3), a2(1, 1, 3);
  const ShiftSpec2P spec = random_shift_2p(a1, a2, 1, {1, 0, 2, 1}, 23);
  const io::json j = reparse(io::to_json(spec));
  const ShiftSpec2P back = io::shift_2p_from_json(j);
  CHECK(io::to_json(back) == j);
  Rng rng(4);
  const DiscreteField f = random_field({a1, a2}, LatticeSpec::scalar(), rng);
  CHECK(apply_shift_2p(back, f).values() == apply_shift_2p(spec, f).values());
}

TEST_CASE("a kernel fixture with a gap is rejected") {
  const GridAxis ax(0, 1, 2);
  io::json j = io::to_json(random_shift_1p(ax, 1, 0, 0, 3));
  j["blocks"][0]["pieces"].erase(0);
  CHECK_THROWS_AS(io::shift_1p_from_json(j), ConfigError);
}

TEST_CASE("symbol fixtures round-trip dyadic rationals exactly") {
  const GridAxis a0(0, 1, 3), a1(1, 1, 3);
  Symbol1P s{a0, {}};
  s.add({{0, 1, {1, 0, 0}}, 1}, 0.375);
  s.add({{0, 0, {0, 0, 0}}, 1}, -1.0 / 1024);
  const Symbol1P s_back = io::symbol_1p_from_json(reparse(io::to_json(s)));
  CHECK(s_back.coefficients == s.coefficients);

  const Symbol2P t = random_symbol_2p(a0, a1, 1.0, 9);
  const Symbol2P t_back = io::symbol_2p_from_json(reparse(io::to_json(t)));
  CHECK(t_back.coefficients == t.coefficients);
}

TEST_CASE("stopping families round-trip with their parent map") {
  const GridAxis ax(0, 1, 6);
  const DyadicCube root{0, 0, {0, 0, 0}};
  const StoppingFamily fam = combined_stopping(random_bmo_function(ax, 3), random_bmo_function(ax, 4), root);
  const StoppingFamily back = io::family_from_json(reparse(io::to_json(fam)));
  CHECK(back.generations == fam.generations);
  CHECK(back.parent == fam.parent);

  io::json bad = io::to_json(fam);
  bad["generations"][0].push_back(io::to_json(DyadicCube{0, 1, {1, 0, 0}}));
  CHECK_THROWS_AS(io::family_from_json(bad), ConfigError);
}

TEST_CASE("reports serialize their fields") {
  NormReport r;
  r.estimate = 1.5;
  r.method = NormMethod::ascent_search;
  r.restarts = 3;
  r.seeds = {1, 2, 3};
  const io::json j = io::to_json(r);
  CHECK(j["method"] == "ascent-search");
  CHECK(j["seeds"].size() == 3);
  CHECK(io::to_json(RademacherResult{2.0, 0.0, true, 16})["value"] == 2.0);
  DecouplingReport d;
  d.degenerate = true;
  CHECK(io::to_json(d)["degenerate"] == true);
  CHECK(io::to_json(RBoundReport{})["estimate"] == 0.0);
}

TEST_CASE("field files list cells in row-major coordinate order") {
  const GridAxis ax(0, 2, 1);
  // Storage is Morton order over (x0, x1); the file lists x0 outer, x1 inner.
  std::vector<double> v(4);
  for (std::size_t m = 0; m < 4; ++m) {
    const DyadicCube q = cube_from_morton(0, 1, 2, m);
    v[m] = 10.0 * q.index[0] + q.index[1];
  }
  const DiscreteField f({ax}, LatticeSpec::scalar(), v);
  CHECK(io::to_json(f)["values"] == io::json::array({0.0, 1.0, 10.0, 11.0}));
}
