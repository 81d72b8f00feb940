#pragma once

#include <array>
#include <cstdint>

#include "dyadshift/field.hpp"
#include "dyadshift/shift.hpp"

namespace dyadshift {

/// How random kernel values are drawn.
struct KernelDraw {
  /// true: every piece is a random matrix rescaled to spectral norm 1, so C_a = 1.
  /// false: entries uniform in [-1, 1] (sup |a| <= 1 for scalar kernels).
  bool unit_norm = true;
  /// Deepest relative subcube depth of the pieces; -1 allows every depth.
  int max_piece_depth = -1;
  /// true: pieces sit exactly at the resolution the blocks see, depth i1 + 1 in y and
  /// i2 + 1 in x (capped by the grid); max_piece_depth is then ignored.
  bool block_resolution = false;
};

Matrix random_matrix(Rng& rng, int d, bool unit_norm);

/// Kernels on every admissible cube, with piece depths drawn per cube.
ShiftSpec1P random_shift_1p(const GridAxis& axis, int d, int i1, int i2, std::uint64_t seed,
                            const KernelDraw& draw = {});
ShiftSpec2P random_shift_2p(const GridAxis& axis1, const GridAxis& axis2, int d, std::array<int, 4> ij,
                            std::uint64_t seed, const KernelDraw& draw = {});

/// Random model operator with matrix coefficients; each admissible (I1, I2) pair is kept
/// with probability density, with coefficient entries uniform in [-1, 1].
ModelOperatorSpec random_model(const GridAxis& axis, int i1, int i2, int d, std::uint64_t seed,
                               double density = 0.5);

/// Scalar function on one axis with dyadic BMO norm 1: iid normal values, a Haar series
/// with normal coefficients, or one with cubed normal coefficients (chosen at random).
DiscreteField random_bmo_function(const GridAxis& axis, std::uint64_t seed);

/// Positive scalar field exp(spread * g) with g iid standard normal.
DiscreteField random_weight(const std::vector<GridAxis>& axes, std::uint64_t seed, double spread = 3.0);

}  // namespace dyadshift
