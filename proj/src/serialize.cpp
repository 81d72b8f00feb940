#include "dyadshift/serialize.hpp"

#include <fstream>

#include "dyadshift/common.hpp"

namespace dyadshift::io {

namespace {

template <class F>
auto parse(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + ": " + e.what());
  }
}

json range(const CellRange& r) { return json::array({r.begin, r.count}); }
CellRange range_from(const json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

// Row-major coordinate index of every cell, in storage (Morton) order.
std::vector<std::size_t> row_major_cells(const GridAxis& axis) {
  std::vector<std::size_t> out(axis.cells());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const DyadicCube q = cube_from_morton(axis.id, axis.level, axis.dim, m);
    std::size_t r = 0;
    for (int k = 0; k < axis.dim; ++k) r = r * axis.side() + static_cast<std::size_t>(q.index[k]);
    out[m] = r;
  }
  return out;
}

// Position in the row-major file layout of every storage position.
std::vector<std::size_t> file_positions(const std::vector<GridAxis>& axes, std::size_t d) {
  std::vector<std::size_t> pos{0};
  for (const auto& a : axes) {
    const auto cells = row_major_cells(a);
    std::vector<std::size_t> next;
    next.reserve(pos.size() * cells.size());
    for (std::size_t p : pos)
      for (std::size_t c : cells) next.push_back(p * cells.size() + c);
    pos = std::move(next);
  }
  std::vector<std::size_t> out;
  out.reserve(pos.size() * d);
  for (std::size_t p : pos)
    for (std::size_t l = 0; l < d; ++l) out.push_back(p * d + l);
  return out;
}

}  // namespace

json to_json(const GridAxis& axis) { return {{"id", axis.id}, {"dim", axis.dim}, {"level", axis.level}}; }

GridAxis axis_from_json(const json& j) {
  return parse("axis", [&] { return GridAxis(j.at("id").get<int>(), j.at("dim").get<int>(), j.at("level").get<int>()); });
}

json to_json(const LatticeSpec& lattice) { return {{"exponents", lattice.exponents()}, {"sizes", lattice.sizes()}}; }

LatticeSpec lattice_from_json(const json& j) {
  return parse("lattice", [&] {
    const auto r = j.at("exponents").get<std::vector<double>>();
    const auto n = j.at("sizes").get<std::vector<int>>();
    if (r.empty() || r.size() != n.size()) throw ConfigError("lattice needs one size per exponent");
    LatticeSpec spec = LatticeSpec::flat(n.back(), r.back());
    for (std::size_t k = r.size() - 1; k-- > 0;) spec = LatticeSpec::nested(n[k], r[k], spec);
    return spec;
  });
}

json to_json(const DyadicCube& cube) { return {{"axis", cube.axis}, {"level", cube.level}, {"index", cube.index}}; }

DyadicCube cube_from_json(const json& j) {
  return parse("cube", [&] {
    DyadicCube q;
    q.axis = j.at("axis").get<int>();
    q.level = j.at("level").get<int>();
    q.index = j.at("index").get<std::array<int, 3>>();
    return q;
  });
}

json to_json(const HaarIndex& h) { return {{"cube", to_json(h.cube)}, {"eta", h.eta}}; }

HaarIndex haar_from_json(const json& j) {
  return parse("Haar index", [&] { return HaarIndex{cube_from_json(j.at("cube")), j.at("eta").get<unsigned>()}; });
}

json to_json(const DiscreteField& f) {
  json axes = json::array();
  for (const auto& a : f.axes()) axes.push_back(to_json(a));
  const auto pos = file_positions(f.axes(), static_cast<std::size_t>(f.lattice_dim()));
  std::vector<double> values(f.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[pos[k]] = f[k];
  return {{"axes", axes}, {"lattice", to_json(f.lattice())}, {"cell_order", "row-major"}, {"values", values}};
}

DiscreteField field_from_json(const json& j) {
  return parse("field", [&] {
    std::vector<GridAxis> axes;
    for (const auto& a : j.at("axes")) axes.push_back(axis_from_json(a));
    if (j.value("cell_order", "row-major") != "row-major") throw ConfigError("unsupported cell order");
    const LatticeSpec lattice = lattice_from_json(j.at("lattice"));
    const auto values = j.at("values").get<std::vector<double>>();
    DiscreteField f(axes, lattice);
    if (values.size() != f.size()) throw ConfigError("field has " + std::to_string(values.size()) + " values, expected " + std::to_string(f.size()));
    const auto pos = file_positions(axes, static_cast<std::size_t>(lattice.dim()));
    for (std::size_t k = 0; k < values.size(); ++k) f[k] = values[pos[k]];
    return f;
  });
}

json to_json(const ShiftSpec1P& spec) {
  json blocks = json::array();
  for (const auto& [cube, block] : spec.kernels.blocks) {
    json pieces = json::array();
    for (const auto& p : block.pieces()) pieces.push_back({{"x", range(p.x)}, {"y", range(p.y)}, {"matrix", p.matrix}});
    blocks.push_back({{"cube", to_json(cube)}, {"pieces", pieces}});
  }
  return {{"i1", spec.i1},
          {"i2", spec.i2},
          {"axis", to_json(spec.kernels.axis)},
          {"d", spec.kernels.d},
          {"claimed_Ca", spec.claimed_Ca},
          {"blocks", blocks}};
}

ShiftSpec1P shift_1p_from_json(const json& j) {
  return parse("one-parameter kernel fixture", [&] {
    ShiftSpec1P s;
    s.i1 = j.at("i1").get<int>();
    s.i2 = j.at("i2").get<int>();
    s.kernels.axis = axis_from_json(j.at("axis"));
    s.kernels.d = j.at("d").get<int>();
    s.claimed_Ca = j.at("claimed_Ca").get<double>();
    for (const auto& b : j.at("blocks")) {
      std::vector<KernelPiece> pieces;
      for (const auto& p : b.at("pieces"))
        pieces.push_back({range_from(p.at("x")), range_from(p.at("y")), p.at("matrix").get<Matrix>()});
      s.kernels.add(KernelBlock::from_pieces(s.kernels.axis, cube_from_json(b.at("cube")), s.kernels.d, std::move(pieces)));
    }
    s.validate();
    return s;
  });
}

json to_json(const ShiftSpec2P& spec) {
  json blocks = json::array();
  for (const auto& [kv, block] : spec.kernels.blocks) {
    json pieces = json::array();
    for (const auto& p : block.pieces())
      pieces.push_back({{"x1", range(p.x1)}, {"x2", range(p.x2)}, {"y1", range(p.y1)}, {"y2", range(p.y2)}, {"matrix", p.matrix}});
    blocks.push_back({{"k", to_json(kv.first)}, {"v", to_json(kv.second)}, {"pieces", pieces}});
  }
  return {{"i1", spec.i1},
          {"i2", spec.i2},
          {"j1", spec.j1},
          {"j2", spec.j2},
          {"axis1", to_json(spec.kernels.axis1)},
          {"axis2", to_json(spec.kernels.axis2)},
          {"d", spec.kernels.d},
          {"claimed_Ca", spec.claimed_Ca},
          {"blocks", blocks}};
}

ShiftSpec2P shift_2p_from_json(const json& j) {
  return parse("two-parameter kernel fixture", [&] {
    ShiftSpec2P s;
    s.i1 = j.at("i1").get<int>();
    s.i2 = j.at("i2").get<int>();
    s.j1 = j.at("j1").get<int>();
    s.j2 = j.at("j2").get<int>();
    s.kernels.axis1 = axis_from_json(j.at("axis1"));
    s.kernels.axis2 = axis_from_json(j.at("axis2"));
    s.kernels.d = j.at("d").get<int>();
    s.claimed_Ca = j.at("claimed_Ca").get<double>();
    for (const auto& b : j.at("blocks")) {
      std::vector<KernelPiece2P> pieces;
      for (const auto& p : b.at("pieces"))
        pieces.push_back({range_from(p.at("x1")), range_from(p.at("x2")), range_from(p.at("y1")),
                          range_from(p.at("y2")), p.at("matrix").get<Matrix>()});
      s.kernels.add(KernelBlock2P::from_pieces(s.kernels.axis1, s.kernels.axis2, cube_from_json(b.at("k")),
                                               cube_from_json(b.at("v")), s.kernels.d, std::move(pieces)));
    }
    s.validate();
    return s;
  });
}

json to_json(const Symbol1P& s) {
  json coefficients = json::array();
  for (const auto& [h, c] : s.coefficients) coefficients.push_back({to_json(h), c});
  return {{"axis", to_json(s.axis)}, {"coefficients", coefficients}};
}

Symbol1P symbol_1p_from_json(const json& j) {
  return parse("symbol fixture", [&] {
    Symbol1P s{axis_from_json(j.at("axis")), {}};
    for (const auto& t : j.at("coefficients")) s.add(haar_from_json(t.at(0)), t.at(1).get<double>());
    return s;
  });
}

json to_json(const Symbol2P& s) {
  json coefficients = json::array();
  for (const auto& [key, c] : s.coefficients) coefficients.push_back({to_json(key.first), to_json(key.second), c});
  return {{"axis1", to_json(s.axis1)}, {"axis2", to_json(s.axis2)}, {"coefficients", coefficients}};
}

Symbol2P symbol_2p_from_json(const json& j) {
  return parse("symbol fixture", [&] {
    Symbol2P s{axis_from_json(j.at("axis1")), axis_from_json(j.at("axis2")), {}};
    for (const auto& t : j.at("coefficients"))
      s.add(haar_from_json(t.at(0)), haar_from_json(t.at(1)), t.at(2).get<double>());
    return s;
  });
}

json to_json(const StoppingFamily& fam) {
  json generations = json::array();
  for (const auto& g : fam.generations) {
    json cubes = json::array();
    for (const auto& q : g) cubes.push_back(to_json(q));
    generations.push_back(cubes);
  }
  return {{"axis", to_json(fam.axis)}, {"root", to_json(fam.root)}, {"generations", generations}, {"warnings", fam.warnings}};
}

StoppingFamily family_from_json(const json& j) {
  return parse("stopping family", [&] {
    std::vector<std::vector<DyadicCube>> generations;
    for (const auto& g : j.at("generations")) {
      generations.emplace_back();
      for (const auto& q : g) generations.back().push_back(cube_from_json(q));
    }
    StoppingFamily fam = family_from_generations(axis_from_json(j.at("axis")), cube_from_json(j.at("root")),
                                                 std::move(generations));
    fam.warnings = j.value("warnings", std::vector<std::string>{});
    return fam;
  });
}

json to_json(const NormReport& r) {
  return {{"estimate", r.estimate},
          {"method", r.method == NormMethod::exact_svd ? "exact-svd" : "ascent-search"},
          {"restarts", r.restarts},
          {"iterations", r.iterations},
          {"lower_bound", r.lower_bound},
          {"seeds", r.seeds}};
}

json to_json(const RademacherResult& r) {
  return {{"value", r.value}, {"std_error", r.std_error}, {"exact", r.exact}, {"samples", r.samples}};
}

json to_json(const RBoundReport& r) {
  return {{"estimate", r.estimate},
          {"best_single", r.best_single},
          {"n_max", r.n_max},
          {"evaluations", r.evaluations},
          {"duality_certified", r.duality_certified},
          {"dual_value", r.dual_value},
          {"member_norms", r.member_norms},
          {"witness_members", r.witness.members}};
}

json to_json(const DecouplingReport& r) {
  return {{"original", r.original}, {"decoupled", r.decoupled}, {"ratio", r.ratio},   {"std_error", r.std_error},
          {"exact", r.exact},       {"degenerate", r.degenerate}, {"trials", r.trials}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return parse("JSON file", [&] { return json::parse(in); });
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace dyadshift::io
