#include "dyadshift/lattice.hpp"

#include <cmath>
#include <sstream>

#include "dyadshift/common.hpp"

namespace dyadshift {

void check_exponent(double p, const char* what) {
  if (!(p >= LatticeSpec::kMinExponent && p <= LatticeSpec::kMaxExponent)) {
    std::ostringstream os;
    os << what << " exponent " << p << " outside [" << LatticeSpec::kMinExponent
       << ", " << LatticeSpec::kMaxExponent << "]";
    throw ConfigError(os.str());
  }
}

LatticeSpec LatticeSpec::flat(int dim, double r) {
  if (dim < 1) throw ConfigError("lattice dimension must be positive");
  check_exponent(r, "lattice");
  return LatticeSpec(dim, r, nullptr);
}

LatticeSpec LatticeSpec::nested(int blocks, double r, const LatticeSpec& inner) {
  if (blocks < 1) throw ConfigError("lattice block count must be positive");
  check_exponent(r, "lattice");
  return LatticeSpec(blocks * inner.dim(), r,
                     std::make_shared<const LatticeSpec>(inner));
}

std::vector<double> LatticeSpec::exponents() const {
  std::vector<double> out{r_};
  if (inner_)
    for (double e : inner_->exponents()) out.push_back(e);
  return out;
}

std::vector<int> LatticeSpec::sizes() const {
  std::vector<int> out{blocks()};
  if (inner_)
    for (int s : inner_->sizes()) out.push_back(s);
  return out;
}

std::string LatticeSpec::describe() const {
  std::ostringstream os;
  os << "l^" << r_ << "_" << blocks();
  if (inner_) os << "(" << inner_->describe() << ")";
  return os.str();
}

bool LatticeSpec::operator==(const LatticeSpec& other) const {
  if (dim_ != other.dim_ || r_ != other.r_) return false;
  if (static_cast<bool>(inner_) != static_cast<bool>(other.inner_)) return false;
  return !inner_ || *inner_ == *other.inner_;
}

double lp_norm(std::span<const double> v, double r) {
  if (r < 1.0) throw ConfigError("lp_norm requires r >= 1");
  double s = 0.0;
  for (double x : v) s += abs_pow(x, r);
  return root(s, r);
}

double lattice_norm(const LatticeSpec& spec, std::span<const double> v) {
  if (static_cast<int>(v.size()) != spec.dim())
    throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                            " does not match lattice dimension " +
                            std::to_string(spec.dim()));
  if (!spec.is_nested()) return lp_norm(v, spec.exponent());
  const int m = spec.inner().dim();
  double s = 0.0;
  for (int b = 0; b < spec.blocks(); ++b)
    s += abs_pow(lattice_norm(spec.inner(), v.subspan(b * m, m)), spec.exponent());
  return root(s, spec.exponent());
}

LatticeSpec koethe_dual(const LatticeSpec& spec) {
  if (!spec.is_nested()) return LatticeSpec::flat(spec.dim(), conjugate(spec.exponent()));
  return LatticeSpec::nested(spec.blocks(), conjugate(spec.exponent()),
                             koethe_dual(spec.inner()));
}

double dual_pairing(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) throw DimensionMismatch("pairing of vectors of different length");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

LatticeVector::LatticeVector(std::vector<double> v, LatticeSpec s)
    : values(std::move(v)), spec(std::move(s)) {
  if (static_cast<int>(values.size()) != spec.dim())
    throw DimensionMismatch("lattice vector length does not match its spec");
}

LatticeVector LatticeVector::abs() const {
  auto out = *this;
  for (double& x : out.values) x = std::fabs(x);
  return out;
}

LatticeVector LatticeVector::power(double alpha) const {
  auto out = *this;
  for (double& x : out.values) x = std::pow(std::fabs(x), alpha);
  return out;
}

}  // namespace dyadshift
