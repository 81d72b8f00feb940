#include "dyadshift/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dyadshift {

MixedNormSpec MixedNormSpec::uniform(std::vector<int> order, double p, LatticeSpec lattice) {
  MixedNormSpec s{std::move(order), {}, std::move(lattice)};
  s.axis_exponents.assign(s.axis_order.size(), p);
  s.validate();
  return s;
}

void MixedNormSpec::validate() const {
  if (axis_order.size() != axis_exponents.size())
    throw ConfigError("one exponent per axis is required");
  std::set<int> seen(axis_order.begin(), axis_order.end());
  if (seen.size() != axis_order.size()) throw AxisError("axis listed twice in a mixed norm");
  for (double p : axis_exponents) check_exponent(p, "axis");
}

MixedNormSpec MixedNormSpec::dual() const {
  MixedNormSpec s = *this;
  for (double& p : s.axis_exponents) p = conjugate(p);
  s.lattice = koethe_dual(lattice);
  return s;
}

NormStructure::NormStructure(const MixedNormSpec& spec, const std::vector<GridAxis>& storage_axes) {
  spec.validate();
  if (storage_axes.size() != spec.axis_order.size())
    throw AxisError("mixed norm axes do not match the field axes");
  std::vector<GridAxis> canonical;
  std::vector<std::size_t> where;
  for (int id : spec.axis_order) {
    auto it = std::find_if(storage_axes.begin(), storage_axes.end(),
                           [id](const GridAxis& a) { return a.id == id; });
    if (it == storage_axes.end())
      throw AxisError("mixed norm names axis " + std::to_string(id) + " absent from the field");
    canonical.push_back(*it);
    where.push_back(static_cast<std::size_t>(it - storage_axes.begin()));
  }
  const std::size_t d = spec.lattice.dim();
  total_ = d;
  for (const auto& a : storage_axes) total_ *= a.cells();

  const auto sizes = spec.lattice.sizes();
  const auto exps = spec.lattice.exponents();
  for (std::size_t k = sizes.size(); k-- > 0;) steps_.push_back({static_cast<std::size_t>(sizes[k]), exps[k], 1.0});
  for (std::size_t k = canonical.size(); k-- > 0;)
    steps_.push_back({canonical[k].cells(), spec.axis_exponents[k], canonical[k].cell_measure()});

  bool identity = true;
  for (std::size_t k = 0; k < where.size(); ++k) identity = identity && where[k] == k;
  if (identity) return;
  // canonical multi-index -> storage offset
  std::vector<std::size_t> stride(storage_axes.size());
  std::size_t s = d;
  for (std::size_t k = storage_axes.size(); k-- > 0;) {
    stride[k] = s;
    s *= storage_axes[k].cells();
  }
  perm_.resize(total_);
  std::vector<std::size_t> idx(canonical.size(), 0);
  for (std::size_t pos = 0; pos < total_; pos += d) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < canonical.size(); ++k) off += idx[k] * stride[where[k]];
    for (std::size_t e = 0; e < d; ++e) perm_[pos + e] = off + e;
    for (std::size_t k = canonical.size(); k-- > 0;) {
      if (++idx[k] < canonical[k].cells()) break;
      idx[k] = 0;
    }
  }
}

std::vector<double> NormStructure::gather(std::span<const double> x) const {
  if (x.size() != total_) throw DimensionMismatch("vector length does not match the norm structure");
  std::vector<double> v(total_);
  if (perm_.empty())
    std::copy(x.begin(), x.end(), v.begin());
  else
    for (std::size_t i = 0; i < total_; ++i) v[i] = x[perm_[i]];
  return v;
}

namespace {

void reduce(const std::vector<double>& in, std::vector<double>& out, const NormStructure::Step& s) {
  const std::size_t groups = in.size() / s.size;
  out.assign(groups, 0.0);
  for (std::size_t g = 0; g < groups; ++g) {
    double acc = 0.0;
    const double* p = in.data() + g * s.size;
    for (std::size_t i = 0; i < s.size; ++i) acc += abs_pow(p[i], s.p);
    out[g] = root(acc * s.weight, s.p);
  }
}

}  // namespace

double NormStructure::value(std::span<const double> x) const {
  std::vector<double> cur = gather(x), next;
  for (const auto& s : steps_) {
    reduce(cur, next, s);
    cur.swap(next);
  }
  return cur[0];
}

std::vector<double> NormStructure::gradient(std::span<const double> x, double* value_out) const {
  std::vector<std::vector<double>> levels;
  levels.push_back(gather(x));
  for (const auto& s : steps_) {
    std::vector<double> next;
    reduce(levels.back(), next, s);
    levels.push_back(std::move(next));
  }
  if (value_out) *value_out = levels.back()[0];
  std::vector<double> up{1.0};
  for (std::size_t k = steps_.size(); k-- > 0;) {
    const auto& s = steps_[k];
    const auto& in = levels[k];
    const auto& out = levels[k + 1];
    std::vector<double> down(in.size(), 0.0);
    for (std::size_t g = 0; g < out.size(); ++g) {
      if (out[g] == 0.0 || up[g] == 0.0) continue;
      const double scale = up[g] * s.weight / abs_pow(out[g], s.p - 1.0);
      for (std::size_t i = 0; i < s.size; ++i) {
        const double v = in[g * s.size + i];
        if (v == 0.0) continue;
        down[g * s.size + i] = scale * abs_pow(v, s.p - 1.0) * (v > 0 ? 1.0 : -1.0);
      }
    }
    up.swap(down);
  }
  if (perm_.empty()) return up;
  std::vector<double> g(total_);
  for (std::size_t i = 0; i < total_; ++i) g[perm_[i]] = up[i];
  return g;
}

NormStructure NormStructure::dual() const {
  NormStructure d;
  d.perm_ = perm_;
  d.total_ = total_;
  for (const auto& s : steps_) {
    const double q = conjugate(s.p);
    d.steps_.push_back({s.size, q, std::pow(s.weight, 1.0 - q)});
  }
  return d;
}

bool NormStructure::hilbertian() const {
  return std::all_of(steps_.begin(), steps_.end(), [](const Step& s) { return s.p == 2.0; });
}

double NormStructure::uniform_weight() const {
  double w = 1.0;
  for (const auto& s : steps_) w *= s.weight;
  return w;
}

double mixed_norm(const DiscreteField& f, const MixedNormSpec& spec) {
  if (spec.lattice.dim() != f.lattice_dim())
    throw DimensionMismatch("mixed norm lattice does not match the field");
  return NormStructure(spec, f.axes()).value(f.values());
}

}  // namespace dyadshift
