#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace dyadshift {

/// One parameter axis: the torus [0,1)^dim cut into dyadic cubes of levels 0..level.
/// Finest cells are stored in Morton (Z) order, so every dyadic cube occupies a
/// contiguous range of cells and its children are consecutive sub-ranges.
struct GridAxis {
  int id = 0;
  int dim = 1;
  int level = 1;

  GridAxis() = default;
  GridAxis(int id_, int dim_, int level_);

  std::size_t side() const { return std::size_t{1} << level; }
  std::size_t cells() const { return std::size_t{1} << (level * dim); }
  double cell_measure() const { return 1.0 / static_cast<double>(cells()); }
  /// Number of finest cells in a cube of the given level.
  std::size_t cells_in(int cube_level) const {
    return std::size_t{1} << ((level - cube_level) * dim);
  }
  std::size_t children_count() const { return std::size_t{1} << dim; }

  bool operator==(const GridAxis&) const = default;
};

struct DyadicCube {
  int axis = 0;
  int level = 0;
  std::array<int, 3> index{0, 0, 0};

  auto operator<=>(const DyadicCube&) const = default;
  bool operator==(const DyadicCube&) const = default;
};

/// Cube plus a sign pattern; bit k of eta selects the cancellative factor in coordinate k.
struct HaarIndex {
  DyadicCube cube;
  unsigned eta = 1;

  auto operator<=>(const HaarIndex&) const = default;
  bool operator==(const HaarIndex&) const = default;
};

struct CellRange {
  std::size_t begin = 0;
  std::size_t count = 0;
  std::size_t end() const { return begin + count; }
  bool contains(std::size_t c) const { return c >= begin && c < begin + count; }
};

std::uint64_t morton_index(const DyadicCube& q, int dim);
DyadicCube cube_from_morton(int axis, int level, int dim, std::uint64_t m);

/// Validates the cube against the axis (level and index range).
void check_cube(const GridAxis& axis, const DyadicCube& q);

CellRange cube_cells(const GridAxis& axis, const DyadicCube& q);
double cube_measure(const GridAxis& axis, const DyadicCube& q);
double cube_measure(int dim, int level);

std::vector<DyadicCube> children(const GridAxis& axis, const DyadicCube& q);
/// Q^{(k)}; throws LevelError when k exceeds the level of q.
DyadicCube ancestor(const DyadicCube& q, int k);
bool contains(const DyadicCube& outer, const DyadicCube& inner);
bool intersects(const DyadicCube& a, const DyadicCube& b);

/// All cubes of levels [min_level, max_level] in Morton order, coarse to fine.
std::vector<DyadicCube> all_cubes(const GridAxis& axis, int min_level, int max_level);
std::vector<DyadicCube> cubes_at(const GridAxis& axis, int level);
/// Descendants at relative depth k, Morton order.
std::vector<DyadicCube> descendants(const GridAxis& axis, const DyadicCube& q, int k);

/// The cube of the given level containing a finest cell.
DyadicCube cube_of_cell(const GridAxis& axis, std::size_t cell, int level);

/// Value of h_I^eta on a finest cell (zero outside I).
double haar_value(const GridAxis& axis, const HaarIndex& h, std::size_t cell);

/// All sign patterns with eta != 0.
std::vector<unsigned> cancellative_patterns(int dim);

/// Every cancellative Haar index on the axis (cubes of level < axis.level).
std::vector<HaarIndex> all_haar(const GridAxis& axis);

std::string to_string(const DyadicCube& q);

}  // namespace dyadshift
