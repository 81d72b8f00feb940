#pragma once

#include <vector>

#include "dyadshift/field.hpp"

namespace dyadshift {

/// Values of h_I^eta on the cells of I (local Morton order).
std::vector<double> haar_profile(const GridAxis& axis, const HaarIndex& h);

/// h_I^eta as a scalar field on its axis.
DiscreteField haar_function(const GridAxis& axis, const HaarIndex& h);

/// <f, h_I^eta> along the axis of I; the result lives on the remaining axes.
DiscreteField haar_pairing(const DiscreteField& f, const HaarIndex& h);

/// (E_{m+1} - E_m) f along one axis, i.e. the sum of all Delta_I f with level(I) = m.
DiscreteField level_difference(const DiscreteField& f, int axis_id, int m);

/// Delta_I f = sum over children of (<f>_child - <f>_I) 1_child.
DiscreteField martingale_difference(const DiscreteField& f, const DyadicCube& cube);

/// Delta_K^i f = sum of Delta_I f over the descendants I of K at relative depth i.
DiscreteField martingale_block(const DiscreteField& f, const DyadicCube& cube, int depth);

/// Two-parameter block Delta_{K x V}^{i,j} f.
DiscreteField biparam_block(const DiscreteField& f, const DyadicCube& k, const DyadicCube& v,
                            int i, int j);

/// Cubes whose level l (0 <= l <= axis.level) satisfies l = -j mod (i+1).
std::vector<DyadicCube> decoupling_subgrid(const GridAxis& axis, int i, int j);

/// Throws LevelError unless level + depth <= axis.level - 1.
void check_block_depth(const GridAxis& axis, int level, int depth);

}  // namespace dyadshift
