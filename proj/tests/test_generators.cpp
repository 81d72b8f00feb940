#include <doctest.h>

#include <cmath>

#include "dyadshift/generators.hpp"
#include "dyadshift/norms.hpp"

using namespace dyadshift;

TEST_CASE("random_matrix respects the requested normalization") {
  Rng rng(3);
  for (int d : {1, 2, 4}) {
    const Matrix unit = random_matrix(rng, d, true);
    CHECK(unit.size() == static_cast<std::size_t>(d * d));
    CHECK(spectral_norm(unit, d) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : random_matrix(rng, d, false)) CHECK(std::fabs(x) <= 1.0);
  }
}

TEST_CASE("random one-parameter shifts are admissible and unit normalized") {
  const GridAxis ax(0, 1, 4);
  for (auto [i1, i2] : {std::pair{0, 0}, std::pair{1, 2}, std::pair{3, 0}}) {
    const ShiftSpec1P spec = random_shift_1p(ax, 2, i1, i2, 11);
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.kernels.blocks.size() == all_cubes(ax, 0, spec.max_cube_level()).size());
    for (const auto& [cube, block] : spec.kernels.blocks) CHECK(block.sup_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("piece depth cap limits the kernel resolution") {
  const GridAxis ax(0, 1, 4);
  KernelDraw draw;
  draw.max_piece_depth = 0;
  const ShiftSpec1P spec = random_shift_1p(ax, 1, 0, 0, 5, draw);
  for (const auto& [cube, block] : spec.kernels.blocks) CHECK(block.pieces().size() == 1);
}

TEST_CASE("random two-parameter shifts validate") {
  const GridAxis a1(0, 1, 3), a2(1, 1, 3);
  const ShiftSpec2P spec = random_shift_2p(a1, a2, 1, {1, 0, 0, 2}, 9);
  CHECK_NOTHROW(spec.validate());
  CHECK(!spec.kernels.blocks.empty());
  for (const auto& [kv, block] : spec.kernels.blocks) CHECK(block.sup_norm() <= 1.0 + 1e-12);
}

TEST_CASE("generators are deterministic in the seed") {
  const GridAxis ax(0, 1, 4);
  const auto a = random_shift_1p(ax, 2, 1, 1, 21), b = random_shift_1p(ax, 2, 1, 1, 21);
  const DiscreteField f = random_bmo_function(ax, 4);
  CHECK(max_abs_diff(random_bmo_function(ax, 4), f) == 0.0);
  for (const auto& [cube, block] : a.kernels.blocks) {
    const auto& other = b.kernels.blocks.at(cube);
    REQUIRE(block.pieces().size() == other.pieces().size());
    for (std::size_t k = 0; k < block.pieces().size(); ++k) CHECK(block.pieces()[k].matrix == other.pieces()[k].matrix);
  }
}

TEST_CASE("random_model keeps admissible pairs with bounded entries") {
  const GridAxis ax(0, 1, 4);
  const ModelOperatorSpec m = random_model(ax, 1, 2, 2, 13, 1.0);
  CHECK(!m.entries.empty());
  for (const auto& [key, coef] : m.entries) {
    CHECK(ancestor(key.in.cube, 1) == ancestor(key.out.cube, 2));
    REQUIRE(coef.is_matrix());
    for (double x : std::get<Matrix>(coef.op)) CHECK(std::fabs(x) <= 1.0);
  }
  CHECK(random_model(ax, 0, 0, 1, 13, 0.0).entries.empty());
}

TEST_CASE("random BMO functions have unit norm") {
  const GridAxis ax(0, 1, 6);
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(bmo_norm(random_bmo_function(ax, s)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random weights are positive") {
  const std::vector<GridAxis> axes{GridAxis(0, 1, 3), GridAxis(1, 1, 3)};
  const DiscreteField w = random_weight(axes, 2);
  CHECK(w.values().size() == 64);
  for (double x : w.values()) CHECK(x > 0.0);
}
