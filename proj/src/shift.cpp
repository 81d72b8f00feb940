#include "dyadshift/shift.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "dyadshift/haar.hpp"

namespace dyadshift {

Matrix identity_matrix(int d) {
  Matrix m(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) m[i * d + i] = 1.0;
  return m;
}

Matrix scaled_matrix(const Matrix& m, double c) {
  Matrix out = m;
  for (double& x : out) x *= c;
  return out;
}

Matrix transpose(const Matrix& m, int d) {
  Matrix t(m.size());
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) t[c * d + r] = m[r * d + c];
  return t;
}

double spectral_norm(const Matrix& m, int d) {
  if (d == 1) return std::fabs(m[0]);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(m.data(), d, d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

namespace {

void check_matrix(const Matrix& m, int d) {
  if (m.size() != static_cast<std::size_t>(d * d))
    throw DimensionMismatch("kernel matrix is not " + std::to_string(d) + "x" + std::to_string(d));
}

// E_fine - E_coarse on a local buffer of n cells with `inner` values each; subcells of
// `fine` cells are grouped by `kids` into coarse cells.
void local_block(double* buf, std::size_t n, std::size_t inner, std::size_t fine, std::size_t kids,
                 std::vector<double>& tmp) {
  const std::size_t coarse = fine * kids;
  tmp.assign((kids + 1) * inner, 0.0);
  double* parent = tmp.data() + kids * inner;
  const double inv_f = 1.0 / static_cast<double>(fine);
  const double inv_c = 1.0 / static_cast<double>(coarse);
  for (std::size_t g0 = 0; g0 < n; g0 += coarse) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (std::size_t k = 0; k < kids; ++k) {
      double* acc = tmp.data() + k * inner;
      for (std::size_t c = g0 + k * fine; c < g0 + (k + 1) * fine; ++c) {
        const double* in = buf + c * inner;
        for (std::size_t i = 0; i < inner; ++i) acc[i] += in[i];
      }
      for (std::size_t i = 0; i < inner; ++i) parent[i] += acc[i];
    }
    for (std::size_t k = 0; k < kids; ++k) {
      const double* acc = tmp.data() + k * inner;
      for (std::size_t c = g0 + k * fine; c < g0 + (k + 1) * fine; ++c) {
        double* o = buf + c * inner;
        for (std::size_t i = 0; i < inner; ++i) o[i] = acc[i] * inv_f - parent[i] * inv_c;
      }
    }
  }
}

// Block of relative depth `depth` on a cube of n cells of an axis with dimension dim.
void cube_block(double* buf, std::size_t n, std::size_t inner, int depth, int dim,
                std::vector<double>& tmp) {
  const std::size_t kids = std::size_t{1} << dim;
  const std::size_t fine = n >> ((depth + 1) * dim);
  local_block(buf, n, inner, fine, kids, tmp);
}

// out[x][m][r] += scale * sum_c M[r][c] s[m][c]
void matvec_add(const Matrix& m, const double* s, double* out, std::size_t mid, int d, double scale) {
  if (d == 1) {
    const double a = m[0] * scale;
    for (std::size_t k = 0; k < mid; ++k) out[k] += a * s[k];
    return;
  }
  for (std::size_t k = 0; k < mid; ++k)
    for (int r = 0; r < d; ++r) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) acc += m[r * d + c] * s[k * d + c];
      out[k * d + r] += scale * acc;
    }
}

// A_K on a local buffer in[n][inner] (inner = mid * d) into out (accumulated).
void average_local(const KernelBlock& kb, const double* in, double* out, std::size_t inner) {
  const int d = kb.d();
  const std::size_t mid = inner / d;
  const double scale = 1.0 / static_cast<double>(kb.cells());
  std::vector<double> s(inner);
  for (const auto& p : kb.pieces()) {
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t y = p.y.begin; y < p.y.end(); ++y) {
      const double* src = in + y * inner;
      for (std::size_t i = 0; i < inner; ++i) s[i] += src[i];
    }
    for (std::size_t x = p.x.begin; x < p.x.end(); ++x)
      matvec_add(p.matrix, s.data(), out + x * inner, mid, d, scale);
  }
}

std::size_t overlap(std::size_t b0, std::size_t e0, std::size_t b1, std::size_t e1) {
  const std::size_t b = std::max(b0, b1), e = std::min(e0, e1);
  return e > b ? e - b : 0;
}

}  // namespace

// ---------------------------------------------------------------- KernelBlock

KernelBlock KernelBlock::from_pieces(const GridAxis& axis, const DyadicCube& cube, int d,
                                     std::vector<KernelPiece> pieces) {
  const CellRange r = cube_cells(axis, cube);
  const std::size_t n = r.count;
  std::vector<char> covered(n * n, 0);
  std::size_t area = 0;
  for (const auto& p : pieces) {
    check_matrix(p.matrix, d);
    if (p.x.end() > n || p.y.end() > n || p.x.count == 0 || p.y.count == 0)
      throw ConfigError("kernel piece outside its cube");
    for (std::size_t x = p.x.begin; x < p.x.end(); ++x)
      for (std::size_t y = p.y.begin; y < p.y.end(); ++y) {
        char& c = covered[x * n + y];
        if (c) throw ConfigError("kernel pieces overlap");
        c = 1;
      }
    area += p.x.count * p.y.count;
  }
  if (area != n * n) throw ConfigError("kernel pieces do not cover K x K");
  KernelBlock kb;
  kb.cube_ = cube;
  kb.cells_ = n;
  kb.d_ = d;
  kb.pieces_ = std::move(pieces);
  return kb;
}

KernelBlock KernelBlock::constant(const GridAxis& axis, const DyadicCube& cube, Matrix m, int d) {
  const std::size_t n = cube_cells(axis, cube).count;
  return from_pieces(axis, cube, d, {{{0, n}, {0, n}, std::move(m)}});
}

KernelBlock KernelBlock::on_subcubes(const GridAxis& axis, const DyadicCube& cube, int d,
                                     int depth_x, int depth_y,
                                     const std::function<Matrix(std::size_t, std::size_t)>& value) {
  if (cube.level + std::max(depth_x, depth_y) > axis.level)
    throw LevelError("kernel subcube depth exceeds the grid");
  const std::size_t n = cube_cells(axis, cube).count;
  const std::size_t px = std::size_t{1} << (depth_x * axis.dim);
  const std::size_t py = std::size_t{1} << (depth_y * axis.dim);
  std::vector<KernelPiece> pieces;
  pieces.reserve(px * py);
  for (std::size_t a = 0; a < px; ++a)
    for (std::size_t b = 0; b < py; ++b)
      pieces.push_back({{a * (n / px), n / px}, {b * (n / py), n / py}, value(a, b)});
  return from_pieces(axis, cube, d, std::move(pieces));
}

const Matrix& KernelBlock::value(std::size_t x, std::size_t y) const {
  for (const auto& p : pieces_)
    if (p.x.contains(x) && p.y.contains(y)) return p.matrix;
  throw ConfigError("kernel value requested outside K x K");
}

KernelBlock KernelBlock::transposed() const {
  KernelBlock t = *this;
  for (auto& p : t.pieces_) {
    std::swap(p.x, p.y);
    p.matrix = transpose(p.matrix, d_);
  }
  return t;
}

double KernelBlock::sup_norm() const {
  double s = 0.0;
  for (const auto& p : pieces_) s = std::max(s, spectral_norm(p.matrix, d_));
  return s;
}

void KernelFamily1P::add(KernelBlock block) {
  check_cube(axis, block.cube());
  if (block.d() != d) throw DimensionMismatch("kernel block lattice dimension differs from the family");
  const DyadicCube c = block.cube();
  blocks.insert_or_assign(c, std::move(block));
}

int ShiftSpec1P::max_cube_level() const { return kernels.axis.level - 1 - std::max(i1, i2); }

void ShiftSpec1P::validate() const {
  if (i1 < 0 || i2 < 0) throw ConfigError("shift depths must be nonnegative");
  if (max_cube_level() < 0)
    throw LevelError("shift depths exceed the grid: no admissible cube");
  for (const auto& [cube, kb] : kernels.blocks)
    if (cube.level > max_cube_level())
      throw LevelError("kernel on " + to_string(cube) + " needs levels beyond the grid");
}

// -------------------------------------------------------------- KernelBlock2P

KernelBlock2P KernelBlock2P::from_pieces(const GridAxis& axis1, const GridAxis& axis2,
                                         const DyadicCube& k, const DyadicCube& v, int d,
                                         std::vector<KernelPiece2P> pieces) {
  const std::size_t n1 = cube_cells(axis1, k).count, n2 = cube_cells(axis2, v).count;
  const std::size_t n = n1 * n2;
  std::vector<char> covered(n * n, 0);
  std::size_t volume = 0;
  for (const auto& p : pieces) {
    check_matrix(p.matrix, d);
    if (p.x1.end() > n1 || p.y1.end() > n1 || p.x2.end() > n2 || p.y2.end() > n2)
      throw ConfigError("kernel piece outside its rectangle");
    for (std::size_t x1 = p.x1.begin; x1 < p.x1.end(); ++x1)
      for (std::size_t x2 = p.x2.begin; x2 < p.x2.end(); ++x2)
        for (std::size_t y1 = p.y1.begin; y1 < p.y1.end(); ++y1)
          for (std::size_t y2 = p.y2.begin; y2 < p.y2.end(); ++y2) {
            char& c = covered[(x1 * n2 + x2) * n + y1 * n2 + y2];
            if (c) throw ConfigError("kernel pieces overlap");
            c = 1;
          }
    volume += p.x1.count * p.x2.count * p.y1.count * p.y2.count;
  }
  if (volume != n * n) throw ConfigError("kernel pieces do not cover the rectangle product");
  KernelBlock2P kb;
  kb.k_ = k;
  kb.v_ = v;
  kb.n1_ = n1;
  kb.n2_ = n2;
  kb.d_ = d;
  kb.pieces_ = std::move(pieces);
  return kb;
}

KernelBlock2P KernelBlock2P::on_subcubes(
    const GridAxis& axis1, const GridAxis& axis2, const DyadicCube& k, const DyadicCube& v, int d,
    std::array<int, 4> depths,
    const std::function<Matrix(std::size_t, std::size_t, std::size_t, std::size_t)>& value) {
  if (k.level + std::max(depths[0], depths[2]) > axis1.level ||
      v.level + std::max(depths[1], depths[3]) > axis2.level)
    throw LevelError("kernel subcube depth exceeds the grid");
  const std::size_t n1 = cube_cells(axis1, k).count, n2 = cube_cells(axis2, v).count;
  const std::size_t cx1 = std::size_t{1} << (depths[0] * axis1.dim);
  const std::size_t cx2 = std::size_t{1} << (depths[1] * axis2.dim);
  const std::size_t cy1 = std::size_t{1} << (depths[2] * axis1.dim);
  const std::size_t cy2 = std::size_t{1} << (depths[3] * axis2.dim);
  std::vector<KernelPiece2P> pieces;
  pieces.reserve(cx1 * cx2 * cy1 * cy2);
  for (std::size_t a1 = 0; a1 < cx1; ++a1)
    for (std::size_t a2 = 0; a2 < cx2; ++a2)
      for (std::size_t b1 = 0; b1 < cy1; ++b1)
        for (std::size_t b2 = 0; b2 < cy2; ++b2)
          pieces.push_back({{a1 * (n1 / cx1), n1 / cx1},
                            {a2 * (n2 / cx2), n2 / cx2},
                            {b1 * (n1 / cy1), n1 / cy1},
                            {b2 * (n2 / cy2), n2 / cy2},
                            value(a1, a2, b1, b2)});
  return from_pieces(axis1, axis2, k, v, d, std::move(pieces));
}

KernelBlock2P KernelBlock2P::tensor(const GridAxis& axis1, const GridAxis& axis2,
                                    const KernelBlock& a, const KernelBlock& b, int d) {
  if (a.d() != 1 || b.d() != 1) throw DimensionMismatch("tensor kernels need scalar factors");
  std::vector<KernelPiece2P> pieces;
  const Matrix id = identity_matrix(d);
  for (const auto& pa : a.pieces())
    for (const auto& pb : b.pieces())
      pieces.push_back({pa.x, pb.x, pa.y, pb.y, scaled_matrix(id, pa.matrix[0] * pb.matrix[0])});
  return from_pieces(axis1, axis2, a.cube(), b.cube(), d, std::move(pieces));
}

KernelBlock2P KernelBlock2P::transposed() const {
  KernelBlock2P t = *this;
  for (auto& p : t.pieces_) {
    std::swap(p.x1, p.y1);
    std::swap(p.x2, p.y2);
    p.matrix = transpose(p.matrix, d_);
  }
  return t;
}

double KernelBlock2P::sup_norm() const {
  double s = 0.0;
  for (const auto& p : pieces_) s = std::max(s, spectral_norm(p.matrix, d_));
  return s;
}

void KernelFamily2P::add(KernelBlock2P block) {
  check_cube(axis1, block.k());
  check_cube(axis2, block.v());
  if (block.d() != d) throw DimensionMismatch("kernel block lattice dimension differs from the family");
  auto key = std::make_pair(block.k(), block.v());
  blocks.insert_or_assign(key, std::move(block));
}

void ShiftSpec2P::validate() const {
  if (i1 < 0 || i2 < 0 || j1 < 0 || j2 < 0) throw ConfigError("shift depths must be nonnegative");
  const int m1 = kernels.axis1.level - 1 - std::max(i1, i2);
  const int m2 = kernels.axis2.level - 1 - std::max(j1, j2);
  if (m1 < 0 || m2 < 0) throw LevelError("shift depths exceed the grid: no admissible rectangle");
  for (const auto& [kv, kb] : kernels.blocks)
    if (kv.first.level > m1 || kv.second.level > m2)
      throw LevelError("kernel on " + to_string(kv.first) + " x " + to_string(kv.second) +
                       " needs levels beyond the grid");
}

// ------------------------------------------------------------------ one-parameter

DiscreteField apply_averaging(const KernelBlock& kernel, const DiscreteField& f) {
  const GridAxis& axis = f.axis(kernel.cube().axis);
  if (kernel.d() != f.lattice_dim()) throw DimensionMismatch("kernel and field lattice dimensions differ");
  const CellRange r = cube_cells(axis, kernel.cube());
  const AxisView v = f.view(axis.id);
  DiscreteField out = f.zeros_like();
  for (std::size_t o = 0; o < v.outer; ++o)
    average_local(kernel, f.values().data() + v.offset(o, r.begin),
                  out.values().data() + v.offset(o, r.begin), v.inner);
  return out;
}

DiscreteField apply_shift_1p(const ShiftSpec1P& spec, const DiscreteField& f) {
  spec.validate();
  const GridAxis& axis = f.axis(spec.kernels.axis.id);
  if (!(axis == spec.kernels.axis)) throw AxisError("shift axis does not match the field axis");
  if (spec.kernels.d != f.lattice_dim()) throw DimensionMismatch("kernel and field lattice dimensions differ");
  const AxisView v = f.view(axis.id);
  DiscreteField out = f.zeros_like();
  std::vector<double> in, mid, tmp;
  for (const auto& [cube, kb] : spec.kernels.blocks) {
    const CellRange r = cube_cells(axis, cube);
    for (std::size_t o = 0; o < v.outer; ++o) {
      const double* src = f.values().data() + v.offset(o, r.begin);
      in.assign(src, src + r.count * v.inner);
      cube_block(in.data(), r.count, v.inner, spec.i1, axis.dim, tmp);
      mid.assign(r.count * v.inner, 0.0);
      average_local(kb, in.data(), mid.data(), v.inner);
      cube_block(mid.data(), r.count, v.inner, spec.i2, axis.dim, tmp);
      double* dst = out.values().data() + v.offset(o, r.begin);
      for (std::size_t i = 0; i < mid.size(); ++i) dst[i] += mid[i];
    }
  }
  return out;
}

ShiftSpec1P adjoint_shift(const ShiftSpec1P& spec) {
  ShiftSpec1P t;
  t.i1 = spec.i2;
  t.i2 = spec.i1;
  t.claimed_Ca = spec.claimed_Ca;
  t.kernels.axis = spec.kernels.axis;
  t.kernels.d = spec.kernels.d;
  for (const auto& [cube, kb] : spec.kernels.blocks) t.kernels.blocks.emplace(cube, kb.transposed());
  return t;
}

// ------------------------------------------------------------------ two-parameter

namespace {

void require_two_axes(const ShiftSpec2P& spec, const DiscreteField& f) {
  if (f.axes().size() != 2 || !(f.axes()[0] == spec.kernels.axis1) ||
      !(f.axes()[1] == spec.kernels.axis2))
    throw AxisError("two-parameter shift needs a field on exactly (axis1, axis2)");
  if (spec.kernels.d != f.lattice_dim()) throw DimensionMismatch("kernel and field lattice dimensions differ");
}

// Two-parameter block on a local [n1][n2][d] buffer.
void rect_block(std::vector<double>& buf, std::size_t n1, std::size_t n2, int d, int i, int j,
                int dim1, int dim2, std::vector<double>& tmp) {
  cube_block(buf.data(), n1, n2 * d, i, dim1, tmp);
  for (std::size_t x1 = 0; x1 < n1; ++x1) cube_block(buf.data() + x1 * n2 * d, n2, d, j, dim2, tmp);
}

}  // namespace

DiscreteField apply_shift_2p(const ShiftSpec2P& spec, const DiscreteField& f) {
  spec.validate();
  require_two_axes(spec, f);
  const GridAxis& a1 = spec.kernels.axis1;
  const GridAxis& a2 = spec.kernels.axis2;
  const int d = spec.kernels.d;
  const std::size_t N2 = a2.cells();
  DiscreteField out = f.zeros_like();
  std::vector<double> in, mid, tmp, s(d);
  for (const auto& [kv, kb] : spec.kernels.blocks) {
    const CellRange r1 = cube_cells(a1, kv.first), r2 = cube_cells(a2, kv.second);
    const std::size_t n1 = r1.count, n2 = r2.count;
    in.assign(n1 * n2 * d, 0.0);
    for (std::size_t x1 = 0; x1 < n1; ++x1)
      std::copy_n(f.values().begin() + ((r1.begin + x1) * N2 + r2.begin) * d, n2 * d,
                  in.begin() + x1 * n2 * d);
    rect_block(in, n1, n2, d, spec.i1, spec.j1, a1.dim, a2.dim, tmp);
    mid.assign(n1 * n2 * d, 0.0);
    const double scale = 1.0 / static_cast<double>(n1 * n2);
    for (const auto& p : kb.pieces()) {
      std::fill(s.begin(), s.end(), 0.0);
      for (std::size_t y1 = p.y1.begin; y1 < p.y1.end(); ++y1)
        for (std::size_t y2 = p.y2.begin; y2 < p.y2.end(); ++y2) {
          const double* src = in.data() + (y1 * n2 + y2) * d;
          for (int c = 0; c < d; ++c) s[c] += src[c];
        }
      for (std::size_t x1 = p.x1.begin; x1 < p.x1.end(); ++x1)
        for (std::size_t x2 = p.x2.begin; x2 < p.x2.end(); ++x2)
          matvec_add(p.matrix, s.data(), mid.data() + (x1 * n2 + x2) * d, 1, d, scale);
    }
    rect_block(mid, n1, n2, d, spec.i2, spec.j2, a1.dim, a2.dim, tmp);
    for (std::size_t x1 = 0; x1 < n1; ++x1) {
      double* dst = out.values().data() + ((r1.begin + x1) * N2 + r2.begin) * d;
      const double* srcm = mid.data() + x1 * n2 * d;
      for (std::size_t i = 0; i < n2 * d; ++i) dst[i] += srcm[i];
    }
  }
  return out;
}

ShiftSpec2P adjoint_shift(const ShiftSpec2P& spec) {
  ShiftSpec2P t;
  t.i1 = spec.i2;
  t.i2 = spec.i1;
  t.j1 = spec.j2;
  t.j2 = spec.j1;
  t.claimed_Ca = spec.claimed_Ca;
  t.kernels.axis1 = spec.kernels.axis1;
  t.kernels.axis2 = spec.kernels.axis2;
  t.kernels.d = spec.kernels.d;
  for (const auto& [kv, kb] : spec.kernels.blocks) t.kernels.blocks.emplace(kv, kb.transposed());
  return t;
}

DiscreteField nest_biparameter(const ShiftSpec2P& spec, const DiscreteField& f) {
  spec.validate();
  require_two_axes(spec, f);
  const GridAxis& a1 = spec.kernels.axis1;
  const GridAxis& a2 = spec.kernels.axis2;
  const int d = spec.kernels.d;
  const std::size_t row = a2.cells() * d;

  std::map<DyadicCube, std::vector<const KernelBlock2P*>> by_k;
  for (const auto& [kv, kb] : spec.kernels.blocks) by_k[kv.first].push_back(&kb);

  DiscreteField out = f.zeros_like();
  std::vector<double> g, h, tmp;
  for (const auto& [k, list] : by_k) {
    const CellRange r1 = cube_cells(a1, k);
    const std::size_t nk = r1.count;
    g.assign(f.values().begin() + r1.begin * row, f.values().begin() + r1.end() * row);
    cube_block(g.data(), nk, row, spec.i1, a1.dim, tmp);

    // inner kernel pieces for each (x1, y1), grouped by V
    std::vector<std::map<DyadicCube, std::vector<KernelPiece>>> bucket(nk * nk);
    for (const KernelBlock2P* kb : list)
      for (const auto& p : kb->pieces())
        for (std::size_t x1 = p.x1.begin; x1 < p.x1.end(); ++x1)
          for (std::size_t y1 = p.y1.begin; y1 < p.y1.end(); ++y1)
            bucket[x1 * nk + y1][kb->v()].push_back({p.x2, p.y2, p.matrix});

    h.assign(nk * row, 0.0);
    for (std::size_t x1 = 0; x1 < nk; ++x1)
      for (std::size_t y1 = 0; y1 < nk; ++y1) {
        auto& pieces_by_v = bucket[x1 * nk + y1];
        if (pieces_by_v.empty()) continue;
        ShiftSpec1P inner;
        inner.i1 = spec.j1;
        inner.i2 = spec.j2;
        inner.kernels.axis = a2;
        inner.kernels.d = d;
        for (auto& [v, pieces] : pieces_by_v)
          inner.kernels.add(KernelBlock::from_pieces(a2, v, d, std::move(pieces)));
        DiscreteField slice({a2}, f.lattice(),
                            std::vector<double>(g.begin() + y1 * row, g.begin() + (y1 + 1) * row));
        const DiscreteField r = apply_shift_1p(inner, slice);
        double* dst = h.data() + x1 * row;
        const double scale = 1.0 / static_cast<double>(nk);
        for (std::size_t i = 0; i < row; ++i) dst[i] += scale * r[i];
      }
    cube_block(h.data(), nk, row, spec.i2, a1.dim, tmp);
    double* dst = out.values().data() + r1.begin * row;
    for (std::size_t i = 0; i < h.size(); ++i) dst[i] += h[i];
  }
  return out;
}

// ------------------------------------------------------------------ compiled form

CompiledShift2P::CompiledShift2P(const ShiftSpec2P& spec)
    : a1_(spec.kernels.axis1), a2_(spec.kernels.axis2), d_(spec.kernels.d), i1_(spec.i1),
      i2_(spec.i2), j1_(spec.j1), j2_(spec.j2) {
  spec.validate();
  const std::size_t A1 = std::size_t{1} << ((i2_ + 1) * a1_.dim);
  const std::size_t A2 = std::size_t{1} << ((j2_ + 1) * a2_.dim);
  const std::size_t B1 = std::size_t{1} << ((i1_ + 1) * a1_.dim);
  const std::size_t B2 = std::size_t{1} << ((j1_ + 1) * a2_.dim);
  const std::size_t cols = B1 * B2 * d_;
  for (const auto& [kv, kb] : spec.kernels.blocks) {
    Block blk;
    blk.l1 = kv.first.level;
    blk.l2 = kv.second.level;
    blk.m1 = morton_index(kv.first, a1_.dim);
    blk.m2 = morton_index(kv.second, a2_.dim);
    blk.reduced.assign(A1 * A2 * d_ * cols, 0.0);
    const std::size_t n1 = kb.cells1(), n2 = kb.cells2();
    const std::size_t sp1 = n1 / A1, sp2 = n2 / A2, sq1 = n1 / B1, sq2 = n2 / B2;
    const double norm = 1.0 / (static_cast<double>(sp1 * sp2) * static_cast<double>(n1 * n2));
    for (const auto& p : kb.pieces())
      for (std::size_t p1 = p.x1.begin / sp1; p1 <= (p.x1.end() - 1) / sp1; ++p1) {
        const std::size_t o1 = overlap(p.x1.begin, p.x1.end(), p1 * sp1, (p1 + 1) * sp1);
        for (std::size_t p2 = p.x2.begin / sp2; p2 <= (p.x2.end() - 1) / sp2; ++p2) {
          const std::size_t o2 = overlap(p.x2.begin, p.x2.end(), p2 * sp2, (p2 + 1) * sp2);
          for (std::size_t q1 = p.y1.begin / sq1; q1 <= (p.y1.end() - 1) / sq1; ++q1) {
            const std::size_t o3 = overlap(p.y1.begin, p.y1.end(), q1 * sq1, (q1 + 1) * sq1);
            for (std::size_t q2 = p.y2.begin / sq2; q2 <= (p.y2.end() - 1) / sq2; ++q2) {
              const std::size_t o4 = overlap(p.y2.begin, p.y2.end(), q2 * sq2, (q2 + 1) * sq2);
              const double w = norm * static_cast<double>(o1 * o2) * static_cast<double>(o3 * o4);
              const std::size_t prow = (p1 * A2 + p2) * d_, qcol = (q1 * B2 + q2) * d_;
              for (int r = 0; r < d_; ++r)
                for (int c = 0; c < d_; ++c)
                  blk.reduced[(prow + r) * cols + qcol + c] += w * p.matrix[r * d_ + c];
            }
          }
        }
      }
    blocks_.push_back(std::move(blk));
  }
}

void CompiledShift2P::apply(std::span<const double> in, std::span<double> out) const {
  const int L1 = a1_.level, L2 = a2_.level, n1 = a1_.dim, n2 = a2_.dim;
  const std::size_t d = d_;
  if (in.size() != a1_.cells() * a2_.cells() * d || out.size() != in.size())
    throw DimensionMismatch("compiled shift applied to a vector of the wrong size");
  auto count1 = [&](int m) { return std::size_t{1} << (m * n1); };
  auto count2 = [&](int m) { return std::size_t{1} << (m * n2); };
  // averages table T[m1][m2] over rectangles of levels (m1, m2)
  std::vector<std::vector<std::vector<double>>> T(L1 + 1, std::vector<std::vector<double>>(L2 + 1));
  T[L1][L2].assign(in.begin(), in.end());
  const std::size_t k1 = std::size_t{1} << n1, k2 = std::size_t{1} << n2;
  for (int m2 = L2 - 1; m2 >= 0; --m2) {
    const auto& src = T[L1][m2 + 1];
    auto& dst = T[L1][m2];
    const std::size_t c1 = count1(L1), c2 = count2(m2), s2 = count2(m2 + 1);
    dst.assign(c1 * c2 * d, 0.0);
    for (std::size_t x1 = 0; x1 < c1; ++x1)
      for (std::size_t x2 = 0; x2 < c2; ++x2)
        for (std::size_t t = 0; t < k2; ++t)
          for (std::size_t e = 0; e < d; ++e)
            dst[(x1 * c2 + x2) * d + e] += src[(x1 * s2 + x2 * k2 + t) * d + e] / static_cast<double>(k2);
  }
  for (int m2 = 0; m2 <= L2; ++m2)
    for (int m1 = L1 - 1; m1 >= 0; --m1) {
      const auto& src = T[m1 + 1][m2];
      auto& dst = T[m1][m2];
      const std::size_t c1 = count1(m1), c2 = count2(m2);
      dst.assign(c1 * c2 * d, 0.0);
      const std::size_t row = c2 * d;
      for (std::size_t x1 = 0; x1 < c1; ++x1)
        for (std::size_t t = 0; t < k1; ++t) {
          const double* s = src.data() + (x1 * k1 + t) * row;
          double* o = dst.data() + x1 * row;
          for (std::size_t i = 0; i < row; ++i) o[i] += s[i] / static_cast<double>(k1);
        }
    }

  const std::size_t A1 = std::size_t{1} << ((i2_ + 1) * n1), A2 = std::size_t{1} << ((j2_ + 1) * n2);
  const std::size_t B1 = std::size_t{1} << ((i1_ + 1) * n1), B2 = std::size_t{1} << ((j1_ + 1) * n2);
  std::vector<std::vector<std::vector<double>>> acc(L1 + 1, std::vector<std::vector<double>>(L2 + 1));
  std::vector<double> g(B1 * B2 * d), y(A1 * A2 * d), z(A1 * A2 * d);
  auto at = [&](int m1, int m2, std::size_t x1, std::size_t x2) {
    return T[m1][m2].data() + (x1 * count2(m2) + x2) * d;
  };
  for (const auto& blk : blocks_) {
    const int q1l = blk.l1 + i1_ + 1, q2l = blk.l2 + j1_ + 1;
    for (std::size_t q1 = 0; q1 < B1; ++q1)
      for (std::size_t q2 = 0; q2 < B2; ++q2) {
        const std::size_t g1 = blk.m1 * B1 + q1, g2 = blk.m2 * B2 + q2;
        const double* a = at(q1l, q2l, g1, g2);
        const double* b = at(q1l - 1, q2l, g1 >> n1, g2);
        const double* c = at(q1l, q2l - 1, g1, g2 >> n2);
        const double* e = at(q1l - 1, q2l - 1, g1 >> n1, g2 >> n2);
        double* dst = g.data() + (q1 * B2 + q2) * d;
        for (std::size_t t = 0; t < d; ++t) dst[t] = a[t] - b[t] - c[t] + e[t];
      }
    const std::size_t cols = B1 * B2 * d;
    for (std::size_t r = 0; r < y.size(); ++r) {
      const double* row = blk.reduced.data() + r * cols;
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += row[c] * g[c];
      y[r] = s;
    }
    // two-parameter block on the P grid: remove sibling means along each axis
    const std::size_t kids1 = k1, kids2 = k2;
    for (std::size_t p1 = 0; p1 < A1; ++p1)
      for (std::size_t p2 = 0; p2 < A2; ++p2)
        for (std::size_t t = 0; t < d; ++t) {
          const std::size_t b1 = (p1 / kids1) * kids1, b2 = (p2 / kids2) * kids2;
          double m1 = 0, m2 = 0, m12 = 0;
          for (std::size_t u = 0; u < kids1; ++u) m1 += y[((b1 + u) * A2 + p2) * d + t];
          for (std::size_t u = 0; u < kids2; ++u) m2 += y[(p1 * A2 + b2 + u) * d + t];
          for (std::size_t u = 0; u < kids1; ++u)
            for (std::size_t w = 0; w < kids2; ++w) m12 += y[((b1 + u) * A2 + b2 + w) * d + t];
          z[(p1 * A2 + p2) * d + t] = y[(p1 * A2 + p2) * d + t] - m1 / static_cast<double>(kids1) -
                                      m2 / static_cast<double>(kids2) +
                                      m12 / static_cast<double>(kids1 * kids2);
        }
    const int p1l = blk.l1 + i2_ + 1, p2l = blk.l2 + j2_ + 1;
    auto& dst = acc[p1l][p2l];
    const std::size_t c2 = count2(p2l);
    if (dst.empty()) dst.assign(count1(p1l) * c2 * d, 0.0);
    for (std::size_t p1 = 0; p1 < A1; ++p1)
      for (std::size_t p2 = 0; p2 < A2; ++p2) {
        double* o = dst.data() + ((blk.m1 * A1 + p1) * c2 + blk.m2 * A2 + p2) * d;
        const double* src = z.data() + (p1 * A2 + p2) * d;
        for (std::size_t t = 0; t < d; ++t) o[t] += src[t];
      }
  }
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t N1 = a1_.cells(), N2 = a2_.cells();
  for (int m1 = 0; m1 <= L1; ++m1)
    for (int m2 = 0; m2 <= L2; ++m2) {
      const auto& src = acc[m1][m2];
      if (src.empty()) continue;
      const int s1 = (L1 - m1) * n1, s2 = (L2 - m2) * n2;
      const std::size_t c2 = count2(m2);
      for (std::size_t x1 = 0; x1 < N1; ++x1)
        for (std::size_t x2 = 0; x2 < N2; ++x2) {
          const double* s = src.data() + ((x1 >> s1) * c2 + (x2 >> s2)) * d;
          double* o = out.data() + (x1 * N2 + x2) * d;
          for (std::size_t t = 0; t < d; ++t) o[t] += s[t];
        }
    }
}

DiscreteField CompiledShift2P::apply(const DiscreteField& f) const {
  DiscreteField out = f.zeros_like();
  apply(f.values(), out.values());
  return out;
}

LinearMap shift_map(const ShiftSpec1P& spec, const LatticeSpec& lattice) {
  spec.validate();
  if (lattice.dim() != spec.kernels.d) throw DimensionMismatch("lattice does not match the kernels");
  FieldShape shape{{spec.kernels.axis}, lattice};
  auto adj = adjoint_shift(spec);
  return LinearMap::from_fields(
      shape, shape, [spec](const DiscreteField& f) { return apply_shift_1p(spec, f); },
      [adj](const DiscreteField& f) { return apply_shift_1p(adj, f); });
}

LinearMap shift_map(const ShiftSpec2P& spec, const LatticeSpec& lattice) {
  if (lattice.dim() != spec.kernels.d) throw DimensionMismatch("lattice does not match the kernels");
  FieldShape shape{{spec.kernels.axis1, spec.kernels.axis2}, lattice};
  auto fwd = std::make_shared<CompiledShift2P>(spec);
  auto bwd = std::make_shared<CompiledShift2P>(adjoint_shift(spec));
  return LinearMap(
      shape, shape, [fwd](std::span<const double> x, std::span<double> y) { fwd->apply(x, y); },
      [bwd](std::span<const double> x, std::span<double> y) { bwd->apply(x, y); });
}

// ------------------------------------------------------------------ model operators

void ModelOperatorSpec::add(const HaarIndex& in, const HaarIndex& out, ModelCoefficient b) {
  check_cube(axis, in.cube);
  check_cube(axis, out.cube);
  if (in.eta == 0 || out.eta == 0) throw ConfigError("model operators use cancellative Haar functions");
  if (in.cube.level - i1 < 0 || out.cube.level - i2 < 0 ||
      !(ancestor(in.cube, i1) == ancestor(out.cube, i2)))
    throw ConfigError("model entry needs I1^(i1) = I2^(i2)");
  check_block_depth(axis, in.cube.level - i1, std::max(i1, i2));
  entries.insert_or_assign(ModelKey{in, out}, std::move(b));
}

double ModelOperatorSpec::budget(const ModelKey& key) const {
  const double k = cube_measure(axis, parent_of(key));
  return k / std::sqrt(cube_measure(axis, key.in.cube) * cube_measure(axis, key.out.cube));
}

DiscreteField apply_model(const ModelOperatorSpec& m, const DiscreteField& f) {
  if (!(f.axis(m.axis.id) == m.axis)) throw AxisError("model axis does not match the field");
  DiscreteField out = f.zeros_like();
  const int d = f.lattice_dim();
  for (const auto& [key, coef] : m.entries) {
    DiscreteField c = haar_pairing(f, key.in);
    DiscreteField bc;
    if (coef.is_matrix()) {
      const Matrix& mat = std::get<Matrix>(coef.op);
      check_matrix(mat, d);
      bc = c.zeros_like();
      for (std::size_t p = 0; p < c.points(); ++p)
        matvec_add(mat, c.values().data() + p * d, bc.values().data() + p * d, 1, d, 1.0);
    } else {
      bc = std::get<FieldOperator>(coef.op)(c);
      c.require_same_shape(bc, "model coefficient output");
    }
    add_insert(out, m.axis.id, cube_cells(m.axis, key.out.cube), haar_profile(m.axis, key.out), bc);
  }
  return out;
}

ShiftSpec1P model_to_shift(const ModelOperatorSpec& m, int d) {
  ShiftSpec1P s;
  s.i1 = m.i1;
  s.i2 = m.i2;
  s.kernels.axis = m.axis;
  s.kernels.d = d;
  std::map<DyadicCube, std::vector<std::pair<ModelKey, const Matrix*>>> by_k;
  for (const auto& [key, coef] : m.entries) {
    if (!coef.is_matrix())
      throw ConfigError("model_to_shift needs matrix coefficients; use apply_model instead");
    check_matrix(std::get<Matrix>(coef.op), d);
    by_k[m.parent_of(key)].emplace_back(key, &std::get<Matrix>(coef.op));
  }
  double ca = 0.0;
  for (const auto& [k, list] : by_k) {
    const CellRange rk = cube_cells(m.axis, k);
    const std::size_t px = std::size_t{1} << ((m.i2 + 1) * m.axis.dim);
    const std::size_t py = std::size_t{1} << ((m.i1 + 1) * m.axis.dim);
    const double kmeas = cube_measure(m.axis, k);
    auto kb = KernelBlock::on_subcubes(m.axis, k, d, m.i2 + 1, m.i1 + 1, [&](std::size_t a, std::size_t b) {
      Matrix acc(static_cast<std::size_t>(d * d), 0.0);
      const std::size_t xc = rk.begin + a * (rk.count / px), yc = rk.begin + b * (rk.count / py);
      for (const auto& [key, mat] : list) {
        const double w = kmeas * haar_value(m.axis, key.out, xc) * haar_value(m.axis, key.in, yc);
        if (w == 0.0) continue;
        for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += w * (*mat)[t];
      }
      return acc;
    });
    ca = std::max(ca, kb.sup_norm());
    s.kernels.add(std::move(kb));
  }
  s.claimed_Ca = ca;
  return s;
}

}  // namespace dyadshift
