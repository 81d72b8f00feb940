#include "dyadshift/grid.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "dyadshift/common.hpp"

namespace dyadshift {

GridAxis::GridAxis(int id_, int dim_, int level_) : id(id_), dim(dim_), level(level_) {
  if (dim < 1 || dim > 3) throw ConfigError("axis dimension must be 1, 2 or 3");
  if (level < 1) throw ConfigError("axis level must be at least 1");
  if (level * dim > 24) throw ConfigError("axis too fine for dense storage");
}

std::uint64_t morton_index(const DyadicCube& q, int dim) {
  std::uint64_t m = 0;
  for (int t = q.level - 1; t >= 0; --t) {
    std::uint64_t digit = 0;
    for (int k = 0; k < dim; ++k)
      digit |= static_cast<std::uint64_t>((q.index[k] >> t) & 1) << k;
    m = (m << dim) | digit;
  }
  return m;
}

DyadicCube cube_from_morton(int axis, int level, int dim, std::uint64_t m) {
  DyadicCube q;
  q.axis = axis;
  q.level = level;
  for (int t = 0; t < level; ++t) {
    const std::uint64_t digit = (m >> (t * dim)) & ((1u << dim) - 1);
    for (int k = 0; k < dim; ++k) q.index[k] |= static_cast<int>((digit >> k) & 1) << t;
  }
  return q;
}

void check_cube(const GridAxis& axis, const DyadicCube& q) {
  if (q.axis != axis.id)
    throw AxisError("cube on axis " + std::to_string(q.axis) + " used with axis " +
                    std::to_string(axis.id));
  if (q.level < 0 || q.level > axis.level)
    throw LevelError("cube level " + std::to_string(q.level) + " outside [0, " +
                     std::to_string(axis.level) + "]");
  for (int k = 0; k < 3; ++k) {
    const int bound = k < axis.dim ? (1 << q.level) : 1;
    if (q.index[k] < 0 || q.index[k] >= bound)
      throw LevelError("cube index out of range: " + to_string(q));
  }
}

CellRange cube_cells(const GridAxis& axis, const DyadicCube& q) {
  check_cube(axis, q);
  const std::size_t count = axis.cells_in(q.level);
  return {static_cast<std::size_t>(morton_index(q, axis.dim)) * count, count};
}

double cube_measure(int dim, int level) { return std::ldexp(1.0, -level * dim); }

double cube_measure(const GridAxis& axis, const DyadicCube& q) {
  return cube_measure(axis.dim, q.level);
}

std::vector<DyadicCube> children(const GridAxis& axis, const DyadicCube& q) {
  check_cube(axis, q);
  if (q.level >= axis.level) throw LevelError("finest-level cube has no children");
  return descendants(axis, q, 1);
}

DyadicCube ancestor(const DyadicCube& q, int k) {
  if (k < 0 || k > q.level)
    throw LevelError("ancestor of order " + std::to_string(k) + " does not exist for " +
                     to_string(q));
  DyadicCube a = q;
  a.level -= k;
  for (int& i : a.index) i >>= k;
  return a;
}

bool contains(const DyadicCube& outer, const DyadicCube& inner) {
  if (outer.axis != inner.axis || inner.level < outer.level) return false;
  return ancestor(inner, inner.level - outer.level) == outer;
}

bool intersects(const DyadicCube& a, const DyadicCube& b) {
  return contains(a, b) || contains(b, a);
}

std::vector<DyadicCube> cubes_at(const GridAxis& axis, int level) {
  if (level < 0 || level > axis.level) throw LevelError("level outside the grid");
  const std::uint64_t count = std::uint64_t{1} << (level * axis.dim);
  std::vector<DyadicCube> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m)
    out.push_back(cube_from_morton(axis.id, level, axis.dim, m));
  return out;
}

std::vector<DyadicCube> all_cubes(const GridAxis& axis, int min_level, int max_level) {
  std::vector<DyadicCube> out;
  for (int l = min_level; l <= max_level; ++l) {
    auto lvl = cubes_at(axis, l);
    out.insert(out.end(), lvl.begin(), lvl.end());
  }
  return out;
}

std::vector<DyadicCube> descendants(const GridAxis& axis, const DyadicCube& q, int k) {
  check_cube(axis, q);
  if (q.level + k > axis.level) throw LevelError("descendant depth exceeds the grid");
  const std::uint64_t base = morton_index(q, axis.dim) << (k * axis.dim);
  const std::uint64_t count = std::uint64_t{1} << (k * axis.dim);
  std::vector<DyadicCube> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m)
    out.push_back(cube_from_morton(axis.id, q.level + k, axis.dim, base + m));
  return out;
}

DyadicCube cube_of_cell(const GridAxis& axis, std::size_t cell, int level) {
  return cube_from_morton(axis.id, level, axis.dim,
                          cell >> ((axis.level - level) * axis.dim));
}

double haar_value(const GridAxis& axis, const HaarIndex& h, std::size_t cell) {
  const CellRange r = cube_cells(axis, h.cube);
  if (!r.contains(cell)) return 0.0;
  if (h.eta != 0 && h.cube.level >= axis.level)
    throw LevelError("cancellative Haar function needs a cube above the finest level");
  const double scale = 1.0 / std::sqrt(cube_measure(axis, h.cube));
  if (h.eta == 0) return scale;
  const unsigned digit = static_cast<unsigned>(
      ((cell - r.begin) >> ((axis.level - h.cube.level - 1) * axis.dim)) &
      ((1u << axis.dim) - 1));
  return (std::popcount(h.eta & digit) & 1) ? -scale : scale;
}

std::vector<unsigned> cancellative_patterns(int dim) {
  std::vector<unsigned> out;
  for (unsigned e = 1; e < (1u << dim); ++e) out.push_back(e);
  return out;
}

std::vector<HaarIndex> all_haar(const GridAxis& axis) {
  std::vector<HaarIndex> out;
  for (const auto& q : all_cubes(axis, 0, axis.level - 1))
    for (unsigned e : cancellative_patterns(axis.dim)) out.push_back({q, e});
  return out;
}

std::string to_string(const DyadicCube& q) {
  std::ostringstream os;
  os << "cube(axis=" << q.axis << ", level=" << q.level << ", index=[" << q.index[0]
     << "," << q.index[1] << "," << q.index[2] << "])";
  return os.str();
}

}  // namespace dyadshift
