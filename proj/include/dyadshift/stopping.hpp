#pragma once

#include <map>
#include <string>
#include <vector>

#include "dyadshift/field.hpp"

namespace dyadshift {

/// Stopping cubes below a root J0: generation 0 is {J0}, each later generation holds the
/// maximal stopped cubes inside members of the previous one.
struct StoppingFamily {
  GridAxis axis;
  DyadicCube root;
  std::vector<std::vector<DyadicCube>> generations;
  std::map<DyadicCube, DyadicCube> parent;  // smallest member containing Q, for every Q in J0
  std::vector<std::string> warnings;

  bool contains(const DyadicCube& q) const;
  /// Generation index of a member; -1 for non-members.
  int generation_of(const DyadicCube& q) const;
  /// Next-generation members inside the member j.
  std::vector<DyadicCube> children_of(const DyadicCube& j) const;
  const DyadicCube& stopping_parent(const DyadicCube& q) const;
  /// Throws ConfigError unless generations are nested, disjoint and within the root.
  void check() const;
};

/// Family with the given generations; fills the parent map and runs check().
StoppingFamily family_from_generations(const GridAxis& axis, const DyadicCube& root,
                                       std::vector<std::vector<DyadicCube>> generations);

/// Maximal Q strictly inside J with |<b>_Q - <b>_J| > threshold, iterated.
StoppingFamily stopping_cubes_b(const DiscreteField& b, const DyadicCube& root, double threshold = 4.0);

/// Maximal Q strictly inside J with <|f|>_Q > threshold * <|f|>_J, iterated.
StoppingFamily principal_cubes(const DiscreteField& f, const DyadicCube& root, double threshold = 4.0);

/// Both rules at once: each generation is the maximal cubes of the union of the two selections.
StoppingFamily combined_stopping(const DiscreteField& b, const DiscreteField& f, const DyadicCube& root,
                                 double threshold = 4.0);

struct SparseReport {
  bool sparse = false;
  double min_ratio = 1.0;  // min |E_Q| / |Q|
  std::map<DyadicCube, std::vector<std::size_t>> witness;  // cells of E_Q
};

/// E_Q = Q minus the next-generation members inside Q; sparse iff |E_Q| >= fraction |Q|
/// for every member and the E_Q are pairwise disjoint.
SparseReport verify_sparse(const StoppingFamily& fam, double fraction = 0.5);

/// Sum of Delta_Q b over the cubes Q with stopping parent j.
DiscreteField stopping_block(const DiscreteField& b, const StoppingFamily& fam, const DyadicCube& j);
/// Sup norm of stopping_block.
double block_sup(const DiscreteField& b, const StoppingFamily& fam, const DyadicCube& j);

/// |(sum_j sum_{J in F_j} <|f_j|>_J^2 1_J)^(1/2)|_p / |(sum_j |f_j|^2)^(1/2)|_p on one axis.
double carleson_embedding_ratio(const std::vector<DiscreteField>& fs, const std::vector<StoppingFamily>& fams,
                                double p);

}  // namespace dyadshift
