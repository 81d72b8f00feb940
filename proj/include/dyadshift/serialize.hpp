#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "dyadshift/field.hpp"
#include "dyadshift/norms.hpp"
#include "dyadshift/paraproduct.hpp"
#include "dyadshift/randomized.hpp"
#include "dyadshift/shift.hpp"
#include "dyadshift/stopping.hpp"

namespace dyadshift::io {

using nlohmann::json;

// Every *_from_json throws ConfigError on a malformed document. Doubles are written in
// shortest round-trip form, so values read back bit-exactly.

json to_json(const GridAxis& axis);
GridAxis axis_from_json(const json& j);

/// {"exponents": [...], "sizes": [...]} from the outermost level inwards.
json to_json(const LatticeSpec& lattice);
LatticeSpec lattice_from_json(const json& j);

json to_json(const DyadicCube& cube);
DyadicCube cube_from_json(const json& j);
json to_json(const HaarIndex& h);
HaarIndex haar_from_json(const json& j);

/// Header (axes, lattice) and the values with cells in row-major coordinate order per axis,
/// axes outermost first and lattice coordinates innermost.
json to_json(const DiscreteField& f);
DiscreteField field_from_json(const json& j);

/// Kernel fixtures: one entry per cube with its pieces (cell ranges local to the cube, in
/// Morton order) and matrices.
json to_json(const ShiftSpec1P& spec);
ShiftSpec1P shift_1p_from_json(const json& j);
json to_json(const ShiftSpec2P& spec);
ShiftSpec2P shift_2p_from_json(const json& j);

/// Symbol fixtures: lists of (Haar index, coefficient) tuples.
json to_json(const Symbol1P& s);
Symbol1P symbol_1p_from_json(const json& j);
json to_json(const Symbol2P& s);
Symbol2P symbol_2p_from_json(const json& j);

/// Generations as cube lists; the parent map is rebuilt on load.
json to_json(const StoppingFamily& fam);
StoppingFamily family_from_json(const json& j);

json to_json(const NormReport& r);
json to_json(const RademacherResult& r);
json to_json(const RBoundReport& r);
json to_json(const DecouplingReport& r);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace dyadshift::io
