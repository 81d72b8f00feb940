#include "dyadshift/linear_map.hpp"

#include <memory>

namespace dyadshift {

std::size_t FieldShape::size() const {
  std::size_t n = lattice.dim();
  for (const auto& a : axes) n *= a.cells();
  return n;
}

LinearMap::LinearMap(FieldShape domain, FieldShape codomain, Fn apply, std::optional<Fn> adjoint)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), apply_(std::move(apply)),
      adjoint_(std::move(adjoint)) {}

LinearMap LinearMap::from_fields(FieldShape domain, FieldShape codomain, FieldFn apply,
                                 std::optional<FieldFn> adjoint) {
  auto wrap = [](FieldShape in, FieldShape out, FieldFn fn) -> Fn {
    return [in, out, fn](std::span<const double> x, std::span<double> y) {
      DiscreteField f = in.wrap(std::vector<double>(x.begin(), x.end()));
      DiscreteField g = fn(f);
      if (g.size() != y.size()) throw DimensionMismatch("operator output has the wrong size");
      std::copy(g.values().begin(), g.values().end(), y.begin());
    };
  };
  std::optional<Fn> adj;
  if (adjoint) adj = wrap(codomain, domain, *adjoint);
  Fn fwd = wrap(domain, codomain, std::move(apply));
  return LinearMap(std::move(domain), std::move(codomain), std::move(fwd), std::move(adj));
}

LinearMap LinearMap::dense(FieldShape domain, FieldShape codomain, Eigen::MatrixXd matrix) {
  if (static_cast<std::size_t>(matrix.rows()) != codomain.size() ||
      static_cast<std::size_t>(matrix.cols()) != domain.size())
    throw DimensionMismatch("matrix shape does not match the field shapes");
  auto m = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  Fn fwd = [m](std::span<const double> x, std::span<double> y) {
    Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())).noalias() =
        *m * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  };
  Fn adj = [m](std::span<const double> y, std::span<double> x) {
    Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())).noalias() =
        m->transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  };
  return LinearMap(std::move(domain), std::move(codomain), std::move(fwd), std::move(adj));
}

void LinearMap::apply_into(std::span<const double> x, std::span<double> y) const {
  if (x.size() != domain_.size() || y.size() != codomain_.size())
    throw DimensionMismatch("linear map applied to a vector of the wrong size");
  apply_(x, y);
}

void LinearMap::apply_adjoint_into(std::span<const double> y, std::span<double> x) const {
  if (!adjoint_) throw ConfigError("linear map has no adjoint");
  if (x.size() != domain_.size() || y.size() != codomain_.size())
    throw DimensionMismatch("adjoint applied to a vector of the wrong size");
  (*adjoint_)(y, x);
}

std::vector<double> LinearMap::apply(std::span<const double> x) const {
  std::vector<double> y(codomain_.size(), 0.0);
  apply_into(x, y);
  return y;
}

std::vector<double> LinearMap::apply_adjoint(std::span<const double> y) const {
  std::vector<double> x(domain_.size(), 0.0);
  apply_adjoint_into(y, x);
  return x;
}

DiscreteField LinearMap::operator()(const DiscreteField& f) const {
  return codomain_.wrap(apply(f.values()));
}

Eigen::MatrixXd LinearMap::assemble() const {
  const std::size_t n = domain_.size(), m = codomain_.size();
  if (n > kMaxDenseDim || m > kMaxDenseDim)
    throw ConfigError("dense assembly is limited to " + std::to_string(kMaxDenseDim) + " entries");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<double> e(n, 0.0), col(m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::fill(col.begin(), col.end(), 0.0);
    apply_into(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return a;
}

LinearMap LinearMap::densified() const { return dense(domain_, codomain_, assemble()); }

}  // namespace dyadshift
