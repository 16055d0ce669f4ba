// SPDX-License-Identifier: MIT
//
// JSON forms of the core types and reports. Doubles are written with 17
// significant digits, so step functions and matrix weights round-trip
// bit-exactly.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sharpweights/functionals.hpp"
#include "sharpweights/matrix_weight.hpp"
#include "sharpweights/operators.hpp"
#include "sharpweights/sparse.hpp"
#include "sharpweights/spb.hpp"

namespace sharpweights {

using Json = nlohmann::json;

Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j);

Json to_json(const StepFunction& f);
StepFunction step_function_from_json(const Json& j);

Json to_json(const MatrixWeight& w);
MatrixWeight matrix_weight_from_json(const Json& j);

// {"n": n, "values": [[...], ...]} with one row per mesh piece.
Json to_json(const VectorField& f);
VectorField vector_field_from_json(const Json& j);

Json to_json(const DyadicLattice& lattice);
DyadicLattice lattice_from_json(const Json& j);

// {"lattice": {...}, "cubes": ["L0/g1/i0", ...], "eta": eta}
Json to_json(const SparseFamily& family);
SparseFamily sparse_family_from_json(const Json& j);

// A list of intervals as [[a, b], ...].
std::vector<Interval> intervals_from_json(const Json& j);

Json to_json(const ApReport& r);
Json to_json(const DualityReport& r);
Json to_json(const WeakNormReport& r);
Json to_json(const DualHardyReport& r);
Json to_json(const ReducingOperator& r);
Json to_json(const DominationReport& r);

Json read_json_file(const std::string& path);
// Writes j.dump(2) plus a newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace sharpweights
