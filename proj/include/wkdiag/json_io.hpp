#pragma once

#include <string>

#include "json.hpp"
#include "wkdiag/molecule.hpp"
#include "wkdiag/reduce.hpp"

namespace wkdiag {

using nlohmann::json;

// Couple schema: nested tree objects {"sign": +1/-1, "children": [...]} and
// the pairing as a list of leaf-path pairs; node ids are preorder paths
// (arrays of child positions from the root).
json couple_to_json(const Couple& c);
Couple couple_from_json(const json& j);

json molecule_to_json(const Molecule& m);
Molecule molecule_from_json(const json& j);

// Trace format: JSON lines, one record per line, with before/after hashes.
std::string trace_to_jsonl(const ReductionTrace& t);

json params_to_json(const GlobalParams& p);
GlobalParams params_from_json(const json& j);

}  // namespace wkdiag
