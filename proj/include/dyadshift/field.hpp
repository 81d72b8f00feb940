#pragma once

#include <span>
#include <vector>

#include "dyadshift/common.hpp"
#include "dyadshift/grid.hpp"
#include "dyadshift/lattice.hpp"

namespace dyadshift {

/// Strides for treating a field as [outer][cells of one axis][inner].
struct AxisView {
  std::size_t outer = 1;
  std::size_t n = 1;
  std::size_t inner = 1;
  std::size_t offset(std::size_t o, std::size_t c) const { return (o * n + c) * inner; }
};

/// Lattice-valued function on a product of truncated grids, constant on finest cells.
/// Layout: axes in the listed order (row-major across axes, Morton within an axis),
/// lattice components innermost.
class DiscreteField {
 public:
  DiscreteField() : lattice_(LatticeSpec::scalar()) {}
  DiscreteField(std::vector<GridAxis> axes, LatticeSpec lattice);
  DiscreteField(std::vector<GridAxis> axes, LatticeSpec lattice, std::vector<double> values);

  static DiscreteField constant(std::vector<GridAxis> axes, LatticeSpec lattice,
                                std::span<const double> value);

  const std::vector<GridAxis>& axes() const { return axes_; }
  const LatticeSpec& lattice() const { return lattice_; }
  int lattice_dim() const { return lattice_.dim(); }
  std::size_t size() const { return values_.size(); }
  std::size_t points() const { return values_.size() / lattice_.dim(); }
  /// Product of finest-cell measures over all axes.
  double cell_measure() const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool has_axis(int id) const;
  std::size_t axis_position(int id) const;
  const GridAxis& axis(int id) const { return axes_[axis_position(id)]; }
  AxisView view(int id) const;
  /// Shape equality (axes and lattice).
  bool same_shape(const DiscreteField& other) const;
  void require_same_shape(const DiscreteField& other, const char* what) const;

  DiscreteField& operator+=(const DiscreteField& other);
  DiscreteField& operator-=(const DiscreteField& other);
  DiscreteField& operator*=(double c);
  void axpy(double c, const DiscreteField& other);
  DiscreteField zeros_like() const { return DiscreteField(axes_, lattice_); }

 private:
  std::vector<GridAxis> axes_;
  LatticeSpec lattice_;
  std::vector<double> values_;
};

DiscreteField operator+(DiscreteField a, const DiscreteField& b);
DiscreteField operator-(DiscreteField a, const DiscreteField& b);
DiscreteField operator*(double c, DiscreteField a);

std::vector<GridAxis> axes_without(const std::vector<GridAxis>& axes, int id);

/// g(rest) = sum_c w[c] f(.., c, ..) along one axis; the axis is dropped.
DiscreteField reduce_axis(const DiscreteField& f, int axis_id, std::span<const double> weights);

/// Weighted sum restricted to a cell range (weights indexed relative to range.begin).
DiscreteField reduce_axis_range(const DiscreteField& f, int axis_id, CellRange range,
                                std::span<const double> weights);

/// out(.., c, ..) += profile[c - range.begin] * g(..) for c in range; g lacks the axis.
void add_insert(DiscreteField& out, int axis_id, CellRange range,
                std::span<const double> profile, const DiscreteField& g);

/// Tensor product of a scalar field a with a field b (axes of a first).
DiscreteField tensor(const DiscreteField& a, const DiscreteField& b);

/// Scalar field on one axis from cell values.
DiscreteField axis_function(const GridAxis& axis, std::vector<double> values);

/// Lattice vector integral of f over the whole domain.
std::vector<double> integrate(const DiscreteField& f);

/// Integral of the componentwise product over the domain, summed over lattice components.
double inner_product(const DiscreteField& f, const DiscreteField& g);

/// Scalar field x -> |f(x)|_E.
DiscreteField pointwise_norm(const DiscreteField& f);

DiscreteField abs(const DiscreteField& f);

/// f multiplied by the indicator of a cube on one axis.
DiscreteField restrict_to_cube(const DiscreteField& f, const DyadicCube& q);

/// E_level f along one axis (average over cubes of that level).
DiscreteField conditional_expectation(const DiscreteField& f, int axis_id, int level);

/// Average of f over a cube on one axis; the axis is dropped.
DiscreteField cube_average(const DiscreteField& f, const DyadicCube& q);

double max_abs(const DiscreteField& f);
double max_abs_diff(const DiscreteField& a, const DiscreteField& b);

/// Field of iid standard normals.
DiscreteField random_field(std::vector<GridAxis> axes, LatticeSpec lattice, Rng& rng);

}  // namespace dyadshift
