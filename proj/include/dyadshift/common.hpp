#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace dyadshift {

/// Vector lengths or lattice dimensions disagree.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A requested parameter axis is missing from a field or norm spec.
struct AxisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A cube level or block depth falls outside the truncated grid.
struct LevelError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Invalid experiment or object configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed derivation: the same (master, stream, counter) triple
/// always yields the same child seed, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t counter = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal() { return normal_(engine_); }
  int sign() { return (engine_() >> 63) ? 1 : -1; }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// |x|^p with fast paths for the exponents used throughout the experiments.
double abs_pow(double x, double p);

/// y^(1/p) for y >= 0, with the same fast paths.
double root(double y, double p);

/// Conjugate exponent p / (p - 1).
inline double conjugate(double p) { return p / (p - 1.0); }

}  // namespace dyadshift
