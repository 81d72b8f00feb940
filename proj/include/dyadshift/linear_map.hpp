#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dyadshift/field.hpp"

namespace dyadshift {

struct FieldShape {
  std::vector<GridAxis> axes;
  LatticeSpec lattice = LatticeSpec::scalar();

  static FieldShape of(const DiscreteField& f) { return {f.axes(), f.lattice()}; }
  std::size_t size() const;
  DiscreteField wrap(std::vector<double> values) const {
    return DiscreteField(axes, lattice, std::move(values));
  }
  DiscreteField zeros() const { return DiscreteField(axes, lattice); }
};

/// Linear map between flat field storages, optionally with its transpose under the plain
/// sum pairing (equal to the L^2 adjoint when domain and codomain share their axes).
class LinearMap {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;
  using FieldFn = std::function<DiscreteField(const DiscreteField&)>;

  static constexpr std::size_t kMaxDenseDim = 4096;

  LinearMap(FieldShape domain, FieldShape codomain, Fn apply, std::optional<Fn> adjoint = std::nullopt);
  static LinearMap from_fields(FieldShape domain, FieldShape codomain, FieldFn apply,
                               std::optional<FieldFn> adjoint = std::nullopt);
  static LinearMap dense(FieldShape domain, FieldShape codomain, Eigen::MatrixXd matrix);

  const FieldShape& domain() const { return domain_; }
  const FieldShape& codomain() const { return codomain_; }
  bool has_adjoint() const { return adjoint_.has_value(); }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_adjoint(std::span<const double> y) const;
  void apply_into(std::span<const double> x, std::span<double> y) const;
  void apply_adjoint_into(std::span<const double> y, std::span<double> x) const;
  DiscreteField operator()(const DiscreteField& f) const;

  /// Dense matrix (codomain x domain); both sides must have at most kMaxDenseDim entries.
  Eigen::MatrixXd assemble() const;
  /// Same map backed by its assembled matrix, with the transpose as adjoint.
  LinearMap densified() const;

 private:
  FieldShape domain_, codomain_;
  Fn apply_;
  std::optional<Fn> adjoint_;
};

}  // namespace dyadshift
