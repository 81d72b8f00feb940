#pragma once

#include <functional>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "dyadshift/field.hpp"
#include "dyadshift/linear_map.hpp"

namespace dyadshift {

/// d x d matrix in row-major order, acting on lattice vectors.
using Matrix = std::vector<double>;

Matrix identity_matrix(int d);
Matrix scaled_matrix(const Matrix& m, double c);
Matrix transpose(const Matrix& m, int d);
/// Largest singular value of a d x d matrix.
double spectral_norm(const Matrix& m, int d);

/// Constant piece of a kernel on X x Y, ranges given in cells relative to the cube start.
struct KernelPiece {
  CellRange x, y;
  Matrix matrix;
};

/// Piecewise-constant matrix kernel a_K on K x K; the pieces partition K x K.
class KernelBlock {
 public:
  static KernelBlock from_pieces(const GridAxis& axis, const DyadicCube& cube, int d,
                                 std::vector<KernelPiece> pieces);
  static KernelBlock constant(const GridAxis& axis, const DyadicCube& cube, Matrix m, int d);
  /// Pieces are products of subcubes of K at relative depths depth_x (for x) and depth_y (for y).
  static KernelBlock on_subcubes(const GridAxis& axis, const DyadicCube& cube, int d, int depth_x,
                                 int depth_y,
                                 const std::function<Matrix(std::size_t, std::size_t)>& value);

  const DyadicCube& cube() const { return cube_; }
  std::size_t cells() const { return cells_; }
  int d() const { return d_; }
  const std::vector<KernelPiece>& pieces() const { return pieces_; }
  /// Kernel value at local cells (x, y).
  const Matrix& value(std::size_t x, std::size_t y) const;
  /// a*(x, y) = a(y, x)^T.
  KernelBlock transposed() const;
  /// max over pieces of the spectral norm.
  double sup_norm() const;

 private:
  DyadicCube cube_;
  std::size_t cells_ = 0;
  int d_ = 1;
  std::vector<KernelPiece> pieces_;
};

struct KernelFamily1P {
  GridAxis axis;
  int d = 1;
  std::map<DyadicCube, KernelBlock> blocks;

  void add(KernelBlock block);
};

struct ShiftSpec1P {
  int i1 = 0;
  int i2 = 0;
  KernelFamily1P kernels;
  double claimed_Ca = 1.0;

  /// Throws LevelError when some kernel sits on a cube too fine for the block depths.
  void validate() const;
  /// Largest admissible cube level: axis.level - 1 - max(i1, i2).
  int max_cube_level() const;
};

struct KernelPiece2P {
  CellRange x1, x2, y1, y2;
  Matrix matrix;
};

/// Piecewise-constant kernel a_{K,V} on (K x V) x (K x V); local cell order (c1, c2) -> c1 * |V| + c2.
class KernelBlock2P {
 public:
  static KernelBlock2P from_pieces(const GridAxis& axis1, const GridAxis& axis2,
                                   const DyadicCube& k, const DyadicCube& v, int d,
                                   std::vector<KernelPiece2P> pieces);
  /// Pieces are products of subcubes at the four relative depths (x1, x2, y1, y2).
  static KernelBlock2P on_subcubes(
      const GridAxis& axis1, const GridAxis& axis2, const DyadicCube& k, const DyadicCube& v, int d,
      std::array<int, 4> depths,
      const std::function<Matrix(std::size_t, std::size_t, std::size_t, std::size_t)>& value);
  /// Scalar tensor kernel a(x1,y1) * b(x2,y2) * Id.
  static KernelBlock2P tensor(const GridAxis& axis1, const GridAxis& axis2, const KernelBlock& a,
                              const KernelBlock& b, int d);

  const DyadicCube& k() const { return k_; }
  const DyadicCube& v() const { return v_; }
  std::size_t cells1() const { return n1_; }
  std::size_t cells2() const { return n2_; }
  int d() const { return d_; }
  const std::vector<KernelPiece2P>& pieces() const { return pieces_; }
  KernelBlock2P transposed() const;
  double sup_norm() const;

 private:
  DyadicCube k_, v_;
  std::size_t n1_ = 0, n2_ = 0;
  int d_ = 1;
  std::vector<KernelPiece2P> pieces_;
};

struct KernelFamily2P {
  GridAxis axis1, axis2;
  int d = 1;
  std::map<std::pair<DyadicCube, DyadicCube>, KernelBlock2P> blocks;

  void add(KernelBlock2P block);
};

struct ShiftSpec2P {
  int i1 = 0, i2 = 0, j1 = 0, j2 = 0;
  KernelFamily2P kernels;
  double claimed_Ca = 1.0;

  void validate() const;
};

/// A_K f(x) = 1_K(x)/|K| * integral over K of a_K(x,y) f(y) dy; other axes of f are passive.
DiscreteField apply_averaging(const KernelBlock& kernel, const DiscreteField& f);

/// Sum over K of Delta_K^{i2} A_K Delta_K^{i1} f (direct evaluation, cube by cube).
DiscreteField apply_shift_1p(const ShiftSpec1P& spec, const DiscreteField& f);

/// Sum over K x V of the two-parameter blocks around A_{K,V}; f must have axes (axis1, axis2).
DiscreteField apply_shift_2p(const ShiftSpec2P& spec, const DiscreteField& f);

ShiftSpec1P adjoint_shift(const ShiftSpec1P& spec);
ShiftSpec2P adjoint_shift(const ShiftSpec2P& spec);

/// The two-parameter shift evaluated as a one-parameter shift on axis1 whose kernel values
/// a_K(x1, y1) are one-parameter shifts on axis2 built from a_{K,V}((x1,.),(y1,.)).
DiscreteField nest_biparameter(const ShiftSpec2P& spec, const DiscreteField& f);

/// Two-parameter shift reduced to the subcube resolutions the blocks can see; fast repeated use.
class CompiledShift2P {
 public:
  explicit CompiledShift2P(const ShiftSpec2P& spec);
  void apply(std::span<const double> in, std::span<double> out) const;
  DiscreteField apply(const DiscreteField& f) const;

 private:
  struct Block {
    int l1, l2;
    std::uint64_t m1, m2;  // Morton indices of K and V
    std::vector<double> reduced;
  };
  GridAxis a1_, a2_;
  int d_;
  int i1_, i2_, j1_, j2_;
  std::vector<Block> blocks_;
};

LinearMap shift_map(const ShiftSpec1P& spec, const LatticeSpec& lattice);
LinearMap shift_map(const ShiftSpec2P& spec, const LatticeSpec& lattice);

using FieldOperator = std::function<DiscreteField(const DiscreteField&)>;

/// Coefficient B_{K,I1,I2}: a lattice matrix or an operator on the remaining-axes field.
struct ModelCoefficient {
  std::variant<Matrix, FieldOperator> op;
  bool is_matrix() const { return std::holds_alternative<Matrix>(op); }
};

struct ModelKey {
  HaarIndex in, out;
  auto operator<=>(const ModelKey&) const = default;
  bool operator==(const ModelKey&) const = default;
};

/// P f = sum over entries of h_{I2} (x) B(<f, h_{I1}>), with I1^{(i1)} = I2^{(i2)} = K.
struct ModelOperatorSpec {
  GridAxis axis;
  int i1 = 0;
  int i2 = 0;
  std::map<ModelKey, ModelCoefficient> entries;

  void add(const HaarIndex& in, const HaarIndex& out, ModelCoefficient b);
  DyadicCube parent_of(const ModelKey& key) const { return ancestor(key.in.cube, i1); }
  /// |K| / (|I1|^(1/2) |I2|^(1/2)).
  double budget(const ModelKey& key) const;
};

DiscreteField apply_model(const ModelOperatorSpec& m, const DiscreteField& f);

/// Kernel family |K| sum h_{I2}(x) h_{I1}(y) B; every entry must be a matrix of size d x d.
ShiftSpec1P model_to_shift(const ModelOperatorSpec& m, int d);

}  // namespace dyadshift
