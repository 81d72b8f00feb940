#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "dyadshift/linear_map.hpp"
#include "dyadshift/mixed_norm.hpp"
#include "dyadshift/norms.hpp"

namespace dyadshift {

using VectorNorm = std::function<double(std::span<const double>)>;

struct RademacherResult {
  double value = 0.0;  // (E|sum eps_i e_i|^2)^(1/2)
  double std_error = 0.0;
  bool exact = true;
  std::size_t samples = 0;
};

/// Exact over all sign patterns for N <= 16, otherwise Monte-Carlo with mc_samples draws.
RademacherResult rademacher_norm(const std::vector<std::vector<double>>& e, const VectorNorm& norm,
                                 std::uint64_t seed = 1, std::size_t mc_samples = 10000);
RademacherResult rademacher_norm(const std::vector<std::vector<double>>& e, const NormStructure& norm,
                                 std::uint64_t seed = 1, std::size_t mc_samples = 10000);

/// (E|sum eps_j e_j|_E^2)^(1/2) / |(sum |e_j|^2)^(1/2)|_E; 1 when both sides vanish.
double khintchine_maurey_ratio(const std::vector<std::vector<double>>& e, const LatticeSpec& lattice);

struct RBoundOptions {
  std::vector<int> sizes{1, 2, 4, 8};  // numbers N of random-sum terms tried
  int restarts = 2;
  int iterations = 40;
  int swap_trials = 8;
  std::uint64_t seed = 1;
  NormOptions member_norms{3, 100, 1e-9, 1};
};

/// Operator selection (indices into the family, repetition allowed) with its inputs.
struct RBoundWitness {
  std::vector<std::size_t> members;
  std::vector<std::vector<double>> inputs;
};

struct RBoundReport {
  double estimate = 0.0;
  double best_single = 0.0;  // largest member norm found
  int n_max = 0;
  std::size_t evaluations = 0;
  bool duality_certified = false;
  double dual_value = 0.0;
  RBoundWitness witness;
  std::vector<double> member_norms;
};

/// Lower bound for the R-bound of a family of maps on L(spec): gradient ascent over inputs
/// and random operator swaps for each N in options.sizes, on top of the member norms.
/// A previous report on a prefix of the family supplies its member norms and witness, so
/// the estimate never decreases when the family grows.
RBoundReport r_bound_estimate(const std::vector<LinearMap>& family, const MixedNormSpec& spec,
                              const RBoundOptions& options = {}, const RBoundReport* previous = nullptr);

/// Point y_V in V (a finest cell) for every cube V of the axis.
struct DecouplingSample {
  int axis = 0;
  std::map<DyadicCube, std::size_t> point;
};

DecouplingSample decoupling_sample(const GridAxis& axis, std::uint64_t seed);

/// Decoupled integral int |sum_V eps_V 1_V(x) Delta_V^i f(y_V)|_E^p dx for one sample.
double decoupled_integral(const DiscreteField& f, int i, int j, double p, const DecouplingSample& y,
                          const std::map<DyadicCube, int>& signs);

enum class ExpectationMode { automatic, exact, monte_carlo };

struct DecouplingReport {
  double original = 0.0;   // |sum_V Delta_V^i f|_{L^p(E)}
  double decoupled = 0.0;  // (E int_Y int |...|^p)^(1/p)
  double ratio = 1.0;      // original / decoupled
  double std_error = 0.0;  // of the decoupled p-th power mean (Monte-Carlo only)
  bool exact = true;
  bool degenerate = false;
  std::size_t trials = 0;
};

/// Both sides of the decoupling estimate over the cubes of decoupling_subgrid(axis, i, j)
/// that carry a depth-i block. The exact mode enumerates, for every chain of nested active
/// cubes, the signs and the depth-(i+1) subcube holding y_V.
DecouplingReport decoupling_ratio(const DiscreteField& f, int i, int j, double p,
                                  ExpectationMode mode = ExpectationMode::automatic,
                                  std::size_t trials = 2000, std::uint64_t seed = 1);

enum class SquareFlavor { full, axis1, axis2 };

/// |(sum_j sum |Delta f_j|^2)^(1/2)| / |(sum_j |f_j|^2)^(1/2)| in the mixed norm, with the
/// blocks Delta over rectangles (full) or over cubes of the first or second field axis.
double square_equivalence_ratio(const std::vector<DiscreteField>& fs, const MixedNormSpec& spec,
                                SquareFlavor flavor);

}  // namespace dyadshift
