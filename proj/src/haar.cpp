#include "dyadshift/haar.hpp"

#include <string>

namespace dyadshift {

std::vector<double> haar_profile(const GridAxis& axis, const HaarIndex& h) {
  const CellRange r = cube_cells(axis, h.cube);
  if (h.eta >= (1u << axis.dim)) throw ConfigError("sign pattern has bits beyond the axis dimension");
  std::vector<double> out(r.count);
  for (std::size_t c = 0; c < r.count; ++c) out[c] = haar_value(axis, h, r.begin + c);
  return out;
}

DiscreteField haar_function(const GridAxis& axis, const HaarIndex& h) {
  const CellRange r = cube_cells(axis, h.cube);
  std::vector<double> v(axis.cells(), 0.0);
  const auto p = haar_profile(axis, h);
  std::copy(p.begin(), p.end(), v.begin() + static_cast<std::ptrdiff_t>(r.begin));
  return axis_function(axis, std::move(v));
}

DiscreteField haar_pairing(const DiscreteField& f, const HaarIndex& h) {
  const GridAxis& axis = f.axis(h.cube.axis);
  auto w = haar_profile(axis, h);
  for (double& x : w) x *= axis.cell_measure();
  return reduce_axis_range(f, axis.id, cube_cells(axis, h.cube), w);
}

void check_block_depth(const GridAxis& axis, int level, int depth) {
  if (level < 0 || depth < 0 || level + depth > axis.level - 1)
    throw LevelError("block of depth " + std::to_string(depth) + " at level " +
                     std::to_string(level) + " needs levels beyond " +
                     std::to_string(axis.level));
}

namespace {

// (E_{m+1} - E_m) f restricted to the cell range r (r aligned to level <= m).
DiscreteField ranged_difference(const DiscreteField& f, int axis_id, int m, CellRange r) {
  const GridAxis& axis = f.axis(axis_id);
  check_block_depth(axis, m, 0);
  const AxisView v = f.view(axis_id);
  const std::size_t coarse = axis.cells_in(m);
  const std::size_t fine = axis.cells_in(m + 1);
  const std::size_t kids = axis.children_count();
  DiscreteField out = f.zeros_like();
  std::vector<double> parent(v.inner), child(kids * v.inner);
  const double* src = f.values().data();
  double* dst = out.values().data();
  for (std::size_t o = 0; o < v.outer; ++o)
    for (std::size_t b0 = r.begin; b0 < r.end(); b0 += coarse) {
      std::fill(child.begin(), child.end(), 0.0);
      for (std::size_t k = 0; k < kids; ++k)
        for (std::size_t c = b0 + k * fine; c < b0 + (k + 1) * fine; ++c) {
          const double* in = src + v.offset(o, c);
          double* acc = child.data() + k * v.inner;
          for (std::size_t i = 0; i < v.inner; ++i) acc[i] += in[i];
        }
      std::fill(parent.begin(), parent.end(), 0.0);
      for (std::size_t k = 0; k < kids; ++k)
        for (std::size_t i = 0; i < v.inner; ++i) parent[i] += child[k * v.inner + i];
      const double inv_fine = 1.0 / static_cast<double>(fine);
      const double inv_coarse = 1.0 / static_cast<double>(coarse);
      for (std::size_t k = 0; k < kids; ++k)
        for (std::size_t c = b0 + k * fine; c < b0 + (k + 1) * fine; ++c) {
          double* o2 = dst + v.offset(o, c);
          for (std::size_t i = 0; i < v.inner; ++i)
            o2[i] = child[k * v.inner + i] * inv_fine - parent[i] * inv_coarse;
        }
    }
  return out;
}

}  // namespace

DiscreteField level_difference(const DiscreteField& f, int axis_id, int m) {
  return ranged_difference(f, axis_id, m, {0, f.axis(axis_id).cells()});
}

DiscreteField martingale_difference(const DiscreteField& f, const DyadicCube& cube) {
  return martingale_block(f, cube, 0);
}

DiscreteField martingale_block(const DiscreteField& f, const DyadicCube& cube, int depth) {
  const GridAxis& axis = f.axis(cube.axis);
  check_block_depth(axis, cube.level, depth);
  return ranged_difference(f, cube.axis, cube.level + depth, cube_cells(axis, cube));
}

DiscreteField biparam_block(const DiscreteField& f, const DyadicCube& k, const DyadicCube& v,
                            int i, int j) {
  if (k.axis == v.axis) throw AxisError("bi-parameter block needs two distinct axes");
  return martingale_block(martingale_block(f, v, j), k, i);
}

std::vector<DyadicCube> decoupling_subgrid(const GridAxis& axis, int i, int j) {
  if (i < 0 || j < 0 || j > i) throw ConfigError("decoupling subgrid needs 0 <= j <= i");
  std::vector<DyadicCube> out;
  for (int l = 0; l <= axis.level; ++l)
    if ((l + j) % (i + 1) == 0) {
      auto lvl = cubes_at(axis, l);
      out.insert(out.end(), lvl.begin(), lvl.end());
    }
  return out;
}

}  // namespace dyadshift
