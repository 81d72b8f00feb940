#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dyadshift {

/// Finite-dimensional sequence lattice: either l^r_d or a nested l^r1(l^r2(...)).
class LatticeSpec {
 public:
  static constexpr double kMinExponent = 1.01;
  static constexpr double kMaxExponent = 101.0;

  static LatticeSpec scalar() { return flat(1, 2.0); }
  static LatticeSpec flat(int dim, double r);
  static LatticeSpec nested(int blocks, double r, const LatticeSpec& inner);

  int dim() const { return dim_; }
  double exponent() const { return r_; }
  int blocks() const { return inner_ ? dim_ / inner_->dim() : dim_; }
  bool is_nested() const { return static_cast<bool>(inner_); }
  const LatticeSpec& inner() const { return *inner_; }

  /// Exponents from the outermost level inwards.
  std::vector<double> exponents() const;
  /// Block sizes from the outermost level inwards (product equals dim()).
  std::vector<int> sizes() const;

  std::string describe() const;
  bool operator==(const LatticeSpec& other) const;

 private:
  LatticeSpec(int dim, double r, std::shared_ptr<const LatticeSpec> inner)
      : dim_(dim), r_(r), inner_(std::move(inner)) {}

  int dim_;
  double r_;
  std::shared_ptr<const LatticeSpec> inner_;
};

void check_exponent(double p, const char* what);

/// (sum |v_i|^r)^(1/r) for any r >= 1.
double lp_norm(std::span<const double> v, double r);

double lattice_norm(const LatticeSpec& spec, std::span<const double> v);

/// Conjugate exponent at every nesting level.
LatticeSpec koethe_dual(const LatticeSpec& spec);

double dual_pairing(std::span<const double> v, std::span<const double> w);

/// Element of the lattice with its spec attached.
struct LatticeVector {
  std::vector<double> values;
  LatticeSpec spec;

  LatticeVector(std::vector<double> v, LatticeSpec s);
  double norm() const { return lattice_norm(spec, values); }
  LatticeVector abs() const;
  LatticeVector power(double alpha) const;
};

}  // namespace dyadshift
