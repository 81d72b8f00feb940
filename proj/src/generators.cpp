#include "dyadshift/generators.hpp"

#include <algorithm>
#include <cmath>

#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"

namespace dyadshift {

namespace {

int piece_depth(Rng& rng, int room, int block_depth, const KernelDraw& draw) {
  if (draw.block_resolution) return std::min(room, block_depth + 1);
  const int top = draw.max_piece_depth < 0 ? room : std::min(room, draw.max_piece_depth);
  return static_cast<int>(rng.below(static_cast<std::size_t>(top) + 1));
}

}  // namespace

Matrix random_matrix(Rng& rng, int d, bool unit_norm) {
  Matrix m(static_cast<std::size_t>(d * d));
  for (double& x : m) x = rng.uniform(-1.0, 1.0);
  if (unit_norm) {
    const double s = spectral_norm(m, d);
    if (s > 0.0)
      for (double& x : m) x /= s;
  }
  return m;
}

ShiftSpec1P random_shift_1p(const GridAxis& axis, int d, int i1, int i2, std::uint64_t seed,
                            const KernelDraw& draw) {
  ShiftSpec1P s;
  s.i1 = i1;
  s.i2 = i2;
  s.kernels.axis = axis;
  s.kernels.d = d;
  s.claimed_Ca = 1.0;
  const int top = s.max_cube_level();
  if (top < 0) throw LevelError("block depths exceed the grid");
  Rng rng(seed);
  for (const auto& k : all_cubes(axis, 0, top)) {
    const int room = axis.level - k.level;
    const int dx = piece_depth(rng, room, i2, draw), dy = piece_depth(rng, room, i1, draw);
    s.kernels.add(KernelBlock::on_subcubes(
        axis, k, d, dx, dy, [&](std::size_t, std::size_t) { return random_matrix(rng, d, draw.unit_norm); }));
  }
  return s;
}

ShiftSpec2P random_shift_2p(const GridAxis& axis1, const GridAxis& axis2, int d, std::array<int, 4> ij,
                            std::uint64_t seed, const KernelDraw& draw) {
  ShiftSpec2P s;
  s.i1 = ij[0];
  s.i2 = ij[1];
  s.j1 = ij[2];
  s.j2 = ij[3];
  s.kernels.axis1 = axis1;
  s.kernels.axis2 = axis2;
  s.kernels.d = d;
  s.claimed_Ca = 1.0;
  const int top1 = axis1.level - 1 - std::max(s.i1, s.i2), top2 = axis2.level - 1 - std::max(s.j1, s.j2);
  if (top1 < 0 || top2 < 0) throw LevelError("block depths exceed the grid");
  Rng rng(seed);
  for (const auto& k : all_cubes(axis1, 0, top1))
    for (const auto& v : all_cubes(axis2, 0, top2)) {
      // Depth order (x1, x2, y1, y2): outputs see i2 and j2, inputs see i1 and j1.
      const std::array<int, 4> block{s.i2, s.j2, s.i1, s.j1};
      std::array<int, 4> depths{};
      for (int t = 0; t < 4; ++t)
        depths[t] = piece_depth(rng, t % 2 == 0 ? axis1.level - k.level : axis2.level - v.level, block[t], draw);
      s.kernels.add(KernelBlock2P::on_subcubes(
          axis1, axis2, k, v, d, depths,
          [&](std::size_t, std::size_t, std::size_t, std::size_t) { return random_matrix(rng, d, draw.unit_norm); }));
    }
  return s;
}

ModelOperatorSpec random_model(const GridAxis& axis, int i1, int i2, int d, std::uint64_t seed, double density) {
  ModelOperatorSpec m;
  m.axis = axis;
  m.i1 = i1;
  m.i2 = i2;
  const int top = axis.level - 1 - std::max(i1, i2);
  if (top < 0) throw LevelError("block depths exceed the grid");
  const auto etas = cancellative_patterns(axis.dim);
  Rng rng(seed);
  for (const auto& k : all_cubes(axis, 0, top))
    for (const auto& a : descendants(axis, k, i1))
      for (const auto& b : descendants(axis, k, i2))
        if (rng.uniform() < density) {
          const unsigned ea = etas[rng.below(etas.size())], eb = etas[rng.below(etas.size())];
          m.add({a, ea}, {b, eb}, {random_matrix(rng, d, false)});
        }
  return m;
}

DiscreteField random_bmo_function(const GridAxis& axis, std::uint64_t seed) {
  Rng rng(seed);
  DiscreteField b({axis}, LatticeSpec::scalar());
  const std::size_t kind = rng.below(3);
  if (kind == 0) {
    for (double& x : b.values()) x = rng.normal();
  } else {
    for (const auto& h : all_haar(axis)) {
      const double g = rng.normal();
      b.axpy(kind == 1 ? g : g * g * g, haar_function(axis, h));
    }
  }
  const double n = bmo_norm(b);
  if (n > 0.0) b *= 1.0 / n;
  return b;
}

DiscreteField random_weight(const std::vector<GridAxis>& axes, std::uint64_t seed, double spread) {
  Rng rng(seed);
  DiscreteField w(axes, LatticeSpec::scalar());
  for (double& x : w.values()) x = std::exp(spread * rng.normal());
  return w;
}

}  // namespace dyadshift
