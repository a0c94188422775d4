#pragma once

// JSON encodings shared by the scenario runner and its reports.
//
//   matrix:    {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
//   map:       {"dim_in", "dim_out", "label", "unital", "choi": matrix}
//   prep:      {"dimA", "dimB", "blocks": matrix}
//   behavior:  {"nX", "nY", "nA", "nB", "p": [...]}  (index ((x*nY+y)*nA+a)*nB+b)
//
// Decoders take a dotted path used in error messages.

#include <string>

#include <json.hpp>

#include "qprep/decomp.hpp"
#include "qprep/matkernel.hpp"
#include "qprep/prep.hpp"
#include "qprep/simfactory.hpp"

namespace qprep::json_io {

using nlohmann::json;

json to_json(const Matrix& m);
json to_json(const HermitianMatrix& m);
json to_json(std::span<const cplx> v);
json to_json(const PositiveMapDescriptor& u);
json to_json(const ValidPreparation& p);
json to_json(const Behavior& b);
json to_json(const DecompOutcome& o);

Matrix matrix_from_json(const json& j, const std::string& path);
HermitianMatrix hermitian_from_json(const json& j, const std::string& path);
Behavior behavior_from_json(const json& j, const std::string& path);
PositiveMapDescriptor map_from_json(const json& j, const std::string& path);

/// Header "x,y,a,b,p" followed by one row per entry.
std::string behavior_csv(const Behavior& b);

/// Throws Schema naming `path` unless j is an object holding `key`.
const json& require(const json& j, const std::string& key, const std::string& path);

}  // namespace qprep::json_io
