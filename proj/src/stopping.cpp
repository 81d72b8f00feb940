#include "dyadshift/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "dyadshift/haar.hpp"
#include "dyadshift/norms.hpp"

namespace dyadshift {

namespace {

void check_scalar_axis(const DiscreteField& f, const char* what) {
  if (f.axes().size() != 1) throw AxisError(std::string(what) + " must live on one axis");
  if (f.lattice_dim() != 1) throw DimensionMismatch(std::string(what) + " must be scalar");
}

/// Cube averages of a scalar field through prefix sums.
struct Averages {
  GridAxis axis;
  std::vector<double> prefix;

  Averages(const DiscreteField& f, bool absolute) : axis(f.axes()[0]), prefix(f.size() + 1, 0.0) {
    for (std::size_t c = 0; c < f.size(); ++c) prefix[c + 1] = prefix[c] + (absolute ? std::fabs(f[c]) : f[c]);
  }
  double operator()(const DyadicCube& q) const {
    const CellRange r = cube_cells(axis, q);
    return (prefix[r.end()] - prefix[r.begin]) / static_cast<double>(r.count);
  }
};

using Rule = std::function<bool(const DyadicCube& j, const DyadicCube& q)>;

// Maximal cubes strictly inside j satisfying the rule, in Morton order.
void select(const GridAxis& axis, const DyadicCube& j, const DyadicCube& q, const Rule& rule,
            std::vector<DyadicCube>& out) {
  for (const auto& c : children(axis, q)) {
    if (rule(j, c)) {
      out.push_back(c);
    } else if (c.level < axis.level) {
      select(axis, j, c, rule, out);
    }
  }
}

StoppingFamily build(const GridAxis& axis, const DyadicCube& root, const std::vector<Rule>& rules) {
  check_cube(axis, root);
  StoppingFamily fam;
  fam.axis = axis;
  fam.root = root;
  fam.generations.push_back({root});
  while (true) {
    std::vector<DyadicCube> next;
    for (const auto& j : fam.generations.back()) {
      if (j.level == axis.level) continue;
      std::vector<DyadicCube> found;
      for (const auto& rule : rules) select(axis, j, j, rule, found);
      std::sort(found.begin(), found.end(), [](const DyadicCube& a, const DyadicCube& b) {
        return a.level != b.level ? a.level < b.level : a < b;
      });
      std::vector<DyadicCube> maximal;
      for (const auto& q : found) {
        const bool covered = std::any_of(maximal.begin(), maximal.end(),
                                         [&](const DyadicCube& m) { return contains(m, q); });
        if (!covered) maximal.push_back(q);
      }
      next.insert(next.end(), maximal.begin(), maximal.end());
    }
    if (next.empty()) break;
    fam.generations.push_back(std::move(next));
  }
  return family_from_generations(axis, root, std::move(fam.generations));
}

Rule b_rule(const Averages& avg, double threshold) {
  return [&avg, threshold](const DyadicCube& j, const DyadicCube& q) {
    return std::fabs(avg(q) - avg(j)) > threshold;
  };
}

Rule f_rule(const Averages& avg, double threshold) {
  return [&avg, threshold](const DyadicCube& j, const DyadicCube& q) { return avg(q) > threshold * avg(j); };
}

void warn_bmo(const DiscreteField& b, StoppingFamily& fam) {
  const double n = bmo_norm(b);
  if (n > 1.0 + 1e-12) fam.warnings.push_back("BMO norm " + std::to_string(n) + " exceeds 1");
}

}  // namespace

StoppingFamily family_from_generations(const GridAxis& axis, const DyadicCube& root,
                                       std::vector<std::vector<DyadicCube>> generations) {
  StoppingFamily fam;
  fam.axis = axis;
  fam.root = root;
  fam.generations = std::move(generations);
  fam.check();
  std::set<DyadicCube> members;
  for (const auto& g : fam.generations) members.insert(g.begin(), g.end());
  for (int k = 0; k <= axis.level - root.level; ++k)
    for (const auto& q : descendants(axis, root, k)) {
      DyadicCube a = q;
      while (!members.count(a)) a = ancestor(a, 1);
      fam.parent[q] = a;
    }
  return fam;
}

bool StoppingFamily::contains(const DyadicCube& q) const { return generation_of(q) >= 0; }

int StoppingFamily::generation_of(const DyadicCube& q) const {
  for (std::size_t g = 0; g < generations.size(); ++g)
    if (std::find(generations[g].begin(), generations[g].end(), q) != generations[g].end())
      return static_cast<int>(g);
  return -1;
}

std::vector<DyadicCube> StoppingFamily::children_of(const DyadicCube& j) const {
  const int g = generation_of(j);
  if (g < 0) throw ConfigError("cube is not a member of the stopping family");
  std::vector<DyadicCube> out;
  if (static_cast<std::size_t>(g + 1) < generations.size())
    for (const auto& q : generations[g + 1])
      if (dyadshift::contains(j, q)) out.push_back(q);
  return out;
}

const DyadicCube& StoppingFamily::stopping_parent(const DyadicCube& q) const {
  auto it = parent.find(q);
  if (it == parent.end()) throw ConfigError("cube lies outside the stopping root");
  return it->second;
}

void StoppingFamily::check() const {
  if (generations.empty() || generations[0] != std::vector<DyadicCube>{root})
    throw ConfigError("generation 0 must be the root alone");
  for (std::size_t g = 1; g < generations.size(); ++g) {
    const auto& gen = generations[g];
    for (std::size_t a = 0; a < gen.size(); ++a) {
      check_cube(axis, gen[a]);
      const bool nested = std::any_of(generations[g - 1].begin(), generations[g - 1].end(), [&](const DyadicCube& p) {
        return p.level < gen[a].level && dyadshift::contains(p, gen[a]);
      });
      if (!nested) throw ConfigError("member not strictly inside a previous-generation member");
      for (std::size_t b = a + 1; b < gen.size(); ++b)
        if (intersects(gen[a], gen[b])) throw ConfigError("members of one generation overlap");
    }
  }
}

StoppingFamily stopping_cubes_b(const DiscreteField& b, const DyadicCube& root, double threshold) {
  check_scalar_axis(b, "b");
  const Averages avg(b, false);
  StoppingFamily fam = build(b.axes()[0], root, {b_rule(avg, threshold)});
  warn_bmo(b, fam);
  return fam;
}

StoppingFamily principal_cubes(const DiscreteField& f, const DyadicCube& root, double threshold) {
  check_scalar_axis(f, "f");
  const Averages avg(f, true);
  return build(f.axes()[0], root, {f_rule(avg, threshold)});
}

StoppingFamily combined_stopping(const DiscreteField& b, const DiscreteField& f, const DyadicCube& root,
                                 double threshold) {
  check_scalar_axis(b, "b");
  check_scalar_axis(f, "f");
  b.require_same_shape(f, "combined stopping");
  const Averages ab(b, false), af(f, true);
  StoppingFamily fam = build(b.axes()[0], root, {b_rule(ab, threshold), f_rule(af, threshold)});
  warn_bmo(b, fam);
  return fam;
}

SparseReport verify_sparse(const StoppingFamily& fam, double fraction) {
  fam.check();
  SparseReport rep;
  rep.sparse = true;
  std::vector<char> owned(fam.axis.cells(), 0);
  for (const auto& gen : fam.generations)
    for (const auto& q : gen) {
      const CellRange r = cube_cells(fam.axis, q);
      std::vector<char> removed(r.count, 0);
      for (const auto& c : fam.children_of(q)) {
        const CellRange rc = cube_cells(fam.axis, c);
        std::fill(removed.begin() + (rc.begin - r.begin), removed.begin() + (rc.end() - r.begin), 1);
      }
      auto& cells = rep.witness[q];
      for (std::size_t k = 0; k < r.count; ++k)
        if (!removed[k]) {
          cells.push_back(r.begin + k);
          if (owned[r.begin + k]++) rep.sparse = false;
        }
      const double ratio = static_cast<double>(cells.size()) / static_cast<double>(r.count);
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      if (ratio < fraction) rep.sparse = false;
    }
  return rep;
}

DiscreteField stopping_block(const DiscreteField& b, const StoppingFamily& fam, const DyadicCube& j) {
  check_scalar_axis(b, "b");
  if (b.axes()[0] != fam.axis) throw AxisError("field and family live on different axes");
  if (!fam.contains(j)) throw ConfigError("cube is not a member of the stopping family");
  DiscreteField sum = b.zeros_like();
  for (const auto& [q, par] : fam.parent)
    if (par == j && q.level < fam.axis.level) sum += martingale_difference(b, q);
  return sum;
}

double block_sup(const DiscreteField& b, const StoppingFamily& fam, const DyadicCube& j) {
  return max_abs(stopping_block(b, fam, j));
}

double carleson_embedding_ratio(const std::vector<DiscreteField>& fs, const std::vector<StoppingFamily>& fams,
                                double p) {
  if (fs.empty() || fs.size() != fams.size()) throw DimensionMismatch("one stopping family per function");
  if (!(p >= 1.0)) throw ConfigError("exponent must be at least 1");
  const GridAxis axis = fs[0].axes()[0];
  std::vector<double> lhs(axis.cells(), 0.0), rhs(axis.cells(), 0.0);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    check_scalar_axis(fs[k], "f");
    if (fs[k].axes()[0] != axis || fams[k].axis != axis) throw AxisError("functions live on different axes");
    if (!verify_sparse(fams[k]).sparse) throw ConfigError("stopping family is not sparse");
    const Averages avg(fs[k], true);
    for (const auto& gen : fams[k].generations)
      for (const auto& q : gen) {
        const double a = avg(q);
        const CellRange r = cube_cells(axis, q);
        for (std::size_t c = r.begin; c < r.end(); ++c) lhs[c] += a * a;
      }
    for (std::size_t c = 0; c < axis.cells(); ++c) rhs[c] += fs[k][c] * fs[k][c];
  }
  double nl = 0.0, nr = 0.0;
  for (std::size_t c = 0; c < axis.cells(); ++c) {
    nl += abs_pow(std::sqrt(lhs[c]), p);
    nr += abs_pow(std::sqrt(rhs[c]), p);
  }
  if (nl == 0.0) return 0.0;
  if (nr == 0.0) throw ConfigError("Carleson embedding ratio with a zero denominator");
  return root(nl / nr, p);
}

}  // namespace dyadshift
