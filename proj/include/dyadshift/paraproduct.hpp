#pragma once

#include <map>
#include <utility>

#include "dyadshift/field.hpp"
#include "dyadshift/linear_map.hpp"
#include "dyadshift/shift.hpp"

namespace dyadshift {

/// Mean-zero symbol b on one axis, given by its Haar coefficients <b, h_J>.
struct Symbol1P {
  GridAxis axis;
  std::map<HaarIndex, double> coefficients;

  void add(const HaarIndex& h, double c);
  DiscreteField field() const;
  void scale(double c);
};

using RectangleKey = std::pair<HaarIndex, HaarIndex>;

/// Coefficients lambda_{I,J} = <b, h_I (x) h_J> on two axes.
struct Symbol2P {
  GridAxis axis1, axis2;
  std::map<RectangleKey, double> coefficients;

  void add(const HaarIndex& i, const HaarIndex& j, double c);
  DiscreteField field() const;
  void scale(double c);
};

/// Symbols b_{K,I1,I2} on the inner axis for every (I1, I2) with I1^{(i1)} = I2^{(i2)} = K.
struct PartialSymbol2P {
  GridAxis outer, inner;
  int i1 = 0, i2 = 0;
  std::map<ModelKey, Symbol1P> entries;

  void add(const HaarIndex& in, const HaarIndex& out, Symbol1P b);
  /// |I1|^(1/2) |I2|^(1/2) / |K|, the BMO allowance of an entry.
  double allowance(const ModelKey& key) const;
  /// Throws ConfigError if some entry exceeds its allowance by more than a relative tol.
  void check_normalization(double tol = 1e-9) const;
};

enum class ParaproductFlavor { standard, mixed };

/// Full bi-parameter paraproducts on (axis2, axis3) attached to outer Haar pairs on axis1.
struct TriSymbolT1 {
  GridAxis axis1, axis2, axis3;
  int i1 = 0, i2 = 0;
  ParaproductFlavor flavor = ParaproductFlavor::standard;
  std::map<ModelKey, Symbol2P> entries;

  void add(const HaarIndex& in, const HaarIndex& out, Symbol2P lambda);
  double allowance(const ModelKey& key) const;
  void check_normalization(double tol = 1e-9) const;
};

struct TriKey {
  HaarIndex in1, out1, in2, out2;
  auto operator<=>(const TriKey&) const = default;
  bool operator==(const TriKey&) const = default;
};

/// Symbols b on axis3 attached to Haar quadruples on (axis1, axis2).
struct TriSymbolT2 {
  GridAxis axis1, axis2, axis3;
  int i1 = 0, i2 = 0, j1 = 0, j2 = 0;
  std::map<TriKey, Symbol1P> entries;

  void add(const TriKey& key, Symbol1P b);
  /// |I1|^(1/2) |I2|^(1/2) |J1|^(1/2) |J2|^(1/2) / (|K| |V|).
  double allowance(const TriKey& key) const;
  void check_normalization(double tol = 1e-9) const;
};

/// pi_b f = sum_I <f>_I Delta_I b along b's axis; other axes and the lattice are passive.
DiscreteField apply_pi(const Symbol1P& b, const DiscreteField& f);
DiscreteField apply_pi_adjoint(const Symbol1P& b, const DiscreteField& g);

/// sum lambda_{I,J} <f>_{I x J} h_I (x) h_J; f must have axes (axis1, axis2).
DiscreteField apply_pi_full(const Symbol2P& lambda, const DiscreteField& f);
DiscreteField apply_pi_full_adjoint(const Symbol2P& lambda, const DiscreteField& g);

/// sum lambda_{I,J} <f, h_I (x) 1_J/|J|> (1_I/|I|) (x) h_J.
DiscreteField apply_pi_mixed(const Symbol2P& lambda, const DiscreteField& f);
DiscreteField apply_pi_mixed_adjoint(const Symbol2P& lambda, const DiscreteField& g);

/// sum h_{I2} (x) pi_{b_{K,I1,I2}}(<f, h_{I1}>_1); f must have axes (outer, inner).
DiscreteField apply_partial_2p(const PartialSymbol2P& p, const DiscreteField& f);
DiscreteField apply_partial_2p_adjoint(const PartialSymbol2P& p, const DiscreteField& g);

/// sum h_{I2} (x) Pi_{K,I1,I2}(<f, h_{I1}>_1); f must have axes (axis1, axis2, axis3).
DiscreteField apply_tri_type1(const TriSymbolT1& t, const DiscreteField& f);
DiscreteField apply_tri_type1_adjoint(const TriSymbolT1& t, const DiscreteField& g);

/// sum h_{I2} (x) h_{J2} (x) pi_b(<f, h_{I1} (x) h_{J1}>_{1,2}).
DiscreteField apply_tri_type2(const TriSymbolT2& t, const DiscreteField& f);
DiscreteField apply_tri_type2_adjoint(const TriSymbolT2& t, const DiscreteField& g);

/// The operators above as linear maps on fields with the symbol's axes (in symbol order).
LinearMap pi_map(const Symbol1P& b, const LatticeSpec& lattice);
LinearMap pi_full_map(const Symbol2P& lambda, const LatticeSpec& lattice);
LinearMap pi_mixed_map(const Symbol2P& lambda, const LatticeSpec& lattice);
LinearMap partial_2p_map(const PartialSymbol2P& p, const LatticeSpec& lattice);
LinearMap tri_type1_map(const TriSymbolT1& t, const LatticeSpec& lattice);
LinearMap tri_type2_map(const TriSymbolT2& t, const LatticeSpec& lattice);

/// Random draws: iid normal coefficients, then rescaled so the measured norm equals the budget.
struct SymbolDraw {
  double density = 1.0;  // probability of keeping each coefficient
  int max_level = -1;    // finest Haar level used; -1 means every level
};

Symbol1P random_symbol_1p(const GridAxis& axis, double budget, std::uint64_t seed,
                          const SymbolDraw& draw = {});
/// Normalized by product_bmo_estimate over the default candidate family.
Symbol2P random_symbol_2p(const GridAxis& axis1, const GridAxis& axis2, double budget,
                          std::uint64_t seed, const SymbolDraw& draw = {});
/// One entry per (I1, I2) with level(K) <= band (all admissible K when band < 0); every
/// entry is scaled to budget times its allowance.
PartialSymbol2P random_partial_2p(const GridAxis& outer, const GridAxis& inner, int i1, int i2,
                                  double budget, std::uint64_t seed, const SymbolDraw& inner_draw = {},
                                  int band = -1);
TriSymbolT1 random_tri_type1(const GridAxis& axis1, const GridAxis& axis2, const GridAxis& axis3,
                             int i1, int i2, ParaproductFlavor flavor, double budget,
                             std::uint64_t seed, const SymbolDraw& inner_draw = {});
TriSymbolT2 random_tri_type2(const GridAxis& axis1, const GridAxis& axis2, const GridAxis& axis3,
                             std::array<int, 4> ij, double budget, std::uint64_t seed,
                             const SymbolDraw& inner_draw = {});

}  // namespace dyadshift
