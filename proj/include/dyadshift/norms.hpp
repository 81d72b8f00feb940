#pragma once

#include <cstdint>
#include <vector>

#include "dyadshift/linear_map.hpp"
#include "dyadshift/mixed_norm.hpp"
#include "dyadshift/paraproduct.hpp"

namespace dyadshift {

/// sup over dyadic cubes I of (1/|I|) int_I |b - <b>_I|, for a scalar field on one axis.
double bmo_norm(const DiscreteField& b);

/// (sum |A_{I,J}|^2 1_{I x J} / |I x J|)^(1/2) as a scalar field on (axis1, axis2).
DiscreteField square_function(const Symbol2P& a);

/// Set of finest cells of axis1 x axis2; bit c1 * cells(axis2) + c2.
struct CellSet {
  std::vector<std::uint64_t> mask;
  double measure = 0.0;

  bool contains(const CellSet& other) const;
  bool empty() const;
};

/// Finite stand-in for the open sets in the product BMO supremum. Every set of finest
/// cells is a union of dyadic rectangles (its cells), so all members are admissible.
struct OmegaCandidateFamily {
  GridAxis axis1, axis2;
  std::vector<CellSet> members;

  CellSet rectangle(const DyadicCube& i, const DyadicCube& j) const;
  void add(CellSet s);
  /// Throws ConfigError for empty members or masks that do not fit the grid.
  void check() const;
};

/// Single rectangles containing a support rectangle, superlevel sets of S(lambda), and
/// pairwise unions of the support rectangles and superlevel sets.
OmegaCandidateFamily default_omega_family(const Symbol2P& lambda);

/// sup over the family of ((1/|Omega|) sum_{I x J in Omega} |lambda_{I,J}|^2)^(1/2); a lower bound.
double product_bmo_estimate(const Symbol2P& lambda, const OmegaCandidateFamily& family);
double product_bmo_estimate(const Symbol2P& lambda);

struct KeyEstimate {
  double lhs = 0.0;
  double bmo = 0.0;
  double square_l1 = 0.0;
  double ratio = 0.0;
  bool degenerate = false;  // zero denominator with nonzero lhs
};

/// sum |lambda||A| over shared rectangles against product_bmo_estimate(lambda) * |S(A)|_{L^1}.
KeyEstimate key_estimate_ratio(const Symbol2P& lambda, const Symbol2P& a);

/// Pointwise sup of averages of |f| over cubes of one axis containing the point.
DiscreteField maximal_1p(const DiscreteField& f, int axis_id);
/// Pointwise sup of averages of |f| over dyadic rectangles on two axes.
DiscreteField strong_maximal(const DiscreteField& f, int axis1, int axis2);

enum class MaximalKind { one_parameter, strong };

/// |(sum_j (M f_j)^r)^(1/r)| / |(sum_j |f_j|^r)^(1/r)| in the mixed norm (lattice ignored).
/// One-parameter M acts along the first field axis; strong M along the first two axes.
double fefferman_stein_ratio(const std::vector<DiscreteField>& fs, double r,
                             const MixedNormSpec& spec, MaximalKind kind);

enum class NormMethod { exact_svd, ascent_search };

struct NormOptions {
  int restarts = 20;
  int max_iterations = 300;
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
};

struct NormReport {
  double estimate = 0.0;
  NormMethod method = NormMethod::exact_svd;
  int restarts = 0;
  int iterations = 0;
  bool lower_bound = false;
  std::vector<std::uint64_t> seeds;
  std::vector<double> maximizer;  // best input found by the search
};

/// True when every exponent of both specs is 2 and the map is small enough to assemble.
bool exact_norm_available(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out);

/// Norm of t from L(in) to L(out). exact_svd assembles the matrix; ascent_search runs the
/// nonlinear power iteration x <- grad N_in^*(t^T grad N_out(t x)) from random starts.
NormReport operator_norm(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out,
                         NormMethod method, const NormOptions& options = {});
/// exact_svd when available, otherwise ascent_search.
NormReport operator_norm(const LinearMap& t, const MixedNormSpec& in, const MixedNormSpec& out,
                         const NormOptions& options = {});

const char* to_string(NormMethod m);

}  // namespace dyadshift
