#pragma once

#include <span>
#include <vector>

#include "dyadshift/field.hpp"

namespace dyadshift {

/// Iterated norm L^{p_1}(L^{p_2}(...(E))) with axis_order listed from outermost to innermost.
struct MixedNormSpec {
  std::vector<int> axis_order;
  std::vector<double> axis_exponents;
  LatticeSpec lattice;

  static MixedNormSpec uniform(std::vector<int> order, double p, LatticeSpec lattice);
  void validate() const;
  MixedNormSpec dual() const;
};

/// Precompiled evaluation of a mixed norm on flat field storage, with its gradient.
/// Reduction steps run from the innermost level (lattice) outwards; each step takes
/// consecutive groups of `size` values to (sum w |v|^p)^(1/p).
class NormStructure {
 public:
  struct Step {
    std::size_t size;
    double p;
    double weight;
  };

  NormStructure(const MixedNormSpec& spec, const std::vector<GridAxis>& storage_axes);

  double value(std::span<const double> x) const;
  /// Gradient of the norm at x; satisfies <g, x> = |x| and |g|_* = 1 for x != 0.
  std::vector<double> gradient(std::span<const double> x, double* value_out = nullptr) const;
  /// Norm structure of the dual space under the plain sum pairing.
  NormStructure dual() const;

  std::size_t size() const { return total_; }
  const std::vector<Step>& steps() const { return steps_; }
  /// True when every exponent equals 2; then |x| = sqrt(uniform_weight) * |x|_2.
  bool hilbertian() const;
  double uniform_weight() const;

 private:
  NormStructure() = default;
  std::vector<double> gather(std::span<const double> x) const;

  std::vector<Step> steps_;
  std::vector<std::size_t> perm_;  // canonical position -> storage position; empty = identity
  std::size_t total_ = 0;
};

double mixed_norm(const DiscreteField& f, const MixedNormSpec& spec);

}  // namespace dyadshift
