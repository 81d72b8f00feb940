#include "dyadshift/field.hpp"

#include <algorithm>
#include <cmath>

namespace dyadshift {

namespace {

std::size_t total_points(const std::vector<GridAxis>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.cells();
  return n;
}

void check_axes(const std::vector<GridAxis>& axes) {
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (axes[i].id == axes[j].id)
        throw AxisError("axis " + std::to_string(axes[i].id) + " listed twice");
}

}  // namespace

DiscreteField::DiscreteField(std::vector<GridAxis> axes, LatticeSpec lattice)
    : axes_(std::move(axes)), lattice_(std::move(lattice)) {
  check_axes(axes_);
  values_.assign(total_points(axes_) * lattice_.dim(), 0.0);
}

DiscreteField::DiscreteField(std::vector<GridAxis> axes, LatticeSpec lattice,
                             std::vector<double> values)
    : axes_(std::move(axes)), lattice_(std::move(lattice)), values_(std::move(values)) {
  check_axes(axes_);
  if (values_.size() != total_points(axes_) * lattice_.dim())
    throw DimensionMismatch("field value count does not match its axes and lattice");
}

DiscreteField DiscreteField::constant(std::vector<GridAxis> axes, LatticeSpec lattice,
                                      std::span<const double> value) {
  if (static_cast<int>(value.size()) != lattice.dim())
    throw DimensionMismatch("constant value has the wrong lattice dimension");
  DiscreteField f(std::move(axes), std::move(lattice));
  const std::size_t d = value.size();
  for (std::size_t p = 0; p < f.points(); ++p)
    std::copy(value.begin(), value.end(), f.values_.begin() + p * d);
  return f;
}

double DiscreteField::cell_measure() const {
  double m = 1.0;
  for (const auto& a : axes_) m *= a.cell_measure();
  return m;
}

bool DiscreteField::has_axis(int id) const {
  return std::any_of(axes_.begin(), axes_.end(), [id](const GridAxis& a) { return a.id == id; });
}

std::size_t DiscreteField::axis_position(int id) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].id == id) return i;
  throw AxisError("field has no axis " + std::to_string(id));
}

AxisView DiscreteField::view(int id) const {
  const std::size_t pos = axis_position(id);
  AxisView v;
  for (std::size_t i = 0; i < pos; ++i) v.outer *= axes_[i].cells();
  v.n = axes_[pos].cells();
  for (std::size_t i = pos + 1; i < axes_.size(); ++i) v.inner *= axes_[i].cells();
  v.inner *= lattice_.dim();
  return v;
}

bool DiscreteField::same_shape(const DiscreteField& other) const {
  return axes_ == other.axes_ && lattice_ == other.lattice_;
}

void DiscreteField::require_same_shape(const DiscreteField& other, const char* what) const {
  if (axes_.size() != other.axes_.size()) throw AxisError(std::string(what) + ": axis count differs");
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (!(axes_[i] == other.axes_[i])) throw AxisError(std::string(what) + ": axes differ");
  if (lattice_.dim() != other.lattice_.dim())
    throw DimensionMismatch(std::string(what) + ": lattice dimensions differ");
}

DiscreteField& DiscreteField::operator+=(const DiscreteField& other) {
  require_same_shape(other, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

DiscreteField& DiscreteField::operator-=(const DiscreteField& other) {
  require_same_shape(other, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

DiscreteField& DiscreteField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

void DiscreteField::axpy(double c, const DiscreteField& other) {
  require_same_shape(other, "field axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * other.values_[i];
}

DiscreteField operator+(DiscreteField a, const DiscreteField& b) { return a += b; }
DiscreteField operator-(DiscreteField a, const DiscreteField& b) { return a -= b; }
DiscreteField operator*(double c, DiscreteField a) { return a *= c; }

std::vector<GridAxis> axes_without(const std::vector<GridAxis>& axes, int id) {
  std::vector<GridAxis> out;
  for (const auto& a : axes)
    if (a.id != id) out.push_back(a);
  return out;
}

DiscreteField reduce_axis_range(const DiscreteField& f, int axis_id, CellRange range,
                                std::span<const double> weights) {
  const AxisView v = f.view(axis_id);
  if (range.end() > v.n || weights.size() < range.count)
    throw DimensionMismatch("reduction range exceeds the axis");
  DiscreteField g(axes_without(f.axes(), axis_id), f.lattice());
  const double* src = f.values().data();
  double* dst = g.values().data();
  for (std::size_t o = 0; o < v.outer; ++o) {
    double* out = dst + o * v.inner;
    for (std::size_t c = 0; c < range.count; ++c) {
      const double w = weights[c];
      if (w == 0.0) continue;
      const double* in = src + v.offset(o, range.begin + c);
      for (std::size_t i = 0; i < v.inner; ++i) out[i] += w * in[i];
    }
  }
  return g;
}

DiscreteField reduce_axis(const DiscreteField& f, int axis_id, std::span<const double> weights) {
  const AxisView v = f.view(axis_id);
  if (weights.size() != v.n) throw DimensionMismatch("reduction weights do not match the axis");
  return reduce_axis_range(f, axis_id, {0, v.n}, weights);
}

void add_insert(DiscreteField& out, int axis_id, CellRange range,
                std::span<const double> profile, const DiscreteField& g) {
  const AxisView v = out.view(axis_id);
  if (g.size() != v.outer * v.inner) throw DimensionMismatch("inserted field has the wrong size");
  if (range.end() > v.n || profile.size() < range.count)
    throw DimensionMismatch("insertion range exceeds the axis");
  double* dst = out.values().data();
  const double* src = g.values().data();
  for (std::size_t o = 0; o < v.outer; ++o) {
    const double* in = src + o * v.inner;
    for (std::size_t c = 0; c < range.count; ++c) {
      const double w = profile[c];
      if (w == 0.0) continue;
      double* o2 = dst + v.offset(o, range.begin + c);
      for (std::size_t i = 0; i < v.inner; ++i) o2[i] += w * in[i];
    }
  }
}

DiscreteField tensor(const DiscreteField& a, const DiscreteField& b) {
  if (a.lattice_dim() != 1) throw DimensionMismatch("left tensor factor must be scalar");
  std::vector<GridAxis> axes = a.axes();
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());
  DiscreteField out(std::move(axes), b.lattice());
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = a[i] * b[j];
  return out;
}

DiscreteField axis_function(const GridAxis& axis, std::vector<double> values) {
  return DiscreteField({axis}, LatticeSpec::scalar(), std::move(values));
}

std::vector<double> integrate(const DiscreteField& f) {
  const std::size_t d = f.lattice_dim();
  std::vector<double> s(d, 0.0);
  for (std::size_t p = 0; p < f.points(); ++p)
    for (std::size_t e = 0; e < d; ++e) s[e] += f[p * d + e];
  const double m = f.cell_measure();
  for (double& x : s) x *= m;
  return s;
}

double inner_product(const DiscreteField& f, const DiscreteField& g) {
  f.require_same_shape(g, "inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.cell_measure();
}

DiscreteField pointwise_norm(const DiscreteField& f) {
  DiscreteField out(f.axes(), LatticeSpec::scalar());
  const std::size_t d = f.lattice_dim();
  for (std::size_t p = 0; p < f.points(); ++p)
    out[p] = lattice_norm(f.lattice(), std::span<const double>(f.values()).subspan(p * d, d));
  return out;
}

DiscreteField abs(const DiscreteField& f) {
  DiscreteField out = f;
  for (double& v : out.values()) v = std::fabs(v);
  return out;
}

DiscreteField restrict_to_cube(const DiscreteField& f, const DyadicCube& q) {
  const AxisView v = f.view(q.axis);
  const CellRange r = cube_cells(f.axis(q.axis), q);
  DiscreteField out = f.zeros_like();
  for (std::size_t o = 0; o < v.outer; ++o)
    for (std::size_t c = r.begin; c < r.end(); ++c)
      std::copy_n(f.values().begin() + v.offset(o, c), v.inner,
                  out.values().begin() + v.offset(o, c));
  return out;
}

DiscreteField conditional_expectation(const DiscreteField& f, int axis_id, int level) {
  const GridAxis& ax = f.axis(axis_id);
  if (level < 0 || level > ax.level) throw LevelError("conditional expectation level outside the grid");
  const AxisView v = f.view(axis_id);
  const std::size_t block = ax.cells_in(level);
  DiscreteField out = f.zeros_like();
  std::vector<double> acc(v.inner);
  const double inv = 1.0 / static_cast<double>(block);
  for (std::size_t o = 0; o < v.outer; ++o)
    for (std::size_t b0 = 0; b0 < v.n; b0 += block) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t c = b0; c < b0 + block; ++c) {
        const double* in = f.values().data() + v.offset(o, c);
        for (std::size_t i = 0; i < v.inner; ++i) acc[i] += in[i];
      }
      for (std::size_t c = b0; c < b0 + block; ++c) {
        double* o2 = out.values().data() + v.offset(o, c);
        for (std::size_t i = 0; i < v.inner; ++i) o2[i] = acc[i] * inv;
      }
    }
  return out;
}

DiscreteField cube_average(const DiscreteField& f, const DyadicCube& q) {
  const CellRange r = cube_cells(f.axis(q.axis), q);
  std::vector<double> w(r.count, 1.0 / static_cast<double>(r.count));
  return reduce_axis_range(f, q.axis, r, w);
}

double max_abs(const DiscreteField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::fabs(v));
  return m;
}

double max_abs_diff(const DiscreteField& a, const DiscreteField& b) {
  a.require_same_shape(b, "field comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

DiscreteField random_field(std::vector<GridAxis> axes, LatticeSpec lattice, Rng& rng) {
  DiscreteField f(std::move(axes), std::move(lattice));
  for (double& v : f.values()) v = rng.normal();
  return f;
}

}  // namespace dyadshift
