#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "effalg/commutative.hpp"
#include "effalg/effect_algebra.hpp"
#include "effalg/hermitian.hpp"
#include "effalg/mv_algebra.hpp"
#include "effalg/report.hpp"
#include "effalg/state_ops.hpp"

namespace effalg {

using Json = nlohmann::json;

// Numbers in any numeric slot may be plain JSON numbers, {"num": a, "den": b}
// objects, or "p/q" strings; rational forms are honored exactly.
Rat json_to_rat(const Json& j);
Json rat_to_json(const Rat& r); // {"num": "...", "den": "..."} unless integral and small

// {"n": int, "zero": int, "one": int, "sum": [[int|null, ...], ...]}
FiniteEffectAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const FiniteEffectAlgebra& e);

// {"n": int, "zero": int, "boxplus": [[int, ...], ...], "neg": [int, ...]}
MvAlgebra mv_from_json(const Json& j);
Json mv_to_json(const MvAlgebra& m);

// {"valid": bool, "violations": [{"axiom": str, "witness": [int...]}, ...]}
Json report_to_json(const ValidationReport& rep);

// {"tau": [int, ...]}
ElementMap tau_from_json(const Json& j);
Json tau_to_json(const ElementMap& m);

// {"dim": d, "re": [[...]], "im": [[...]]} ("im" optional, defaults to zero)
CMat matrix_from_json(const Json& j);
Json matrix_to_json(const CMat& a);

// {"dim": d, "matrix": [[...]]} with a d^2 x d^2 real action
HermitianMap map_from_json(const Json& j);
Json map_to_json(const HermitianMap& m);

// Array of matrix objects.
std::vector<CMat> pvm_from_json(const Json& j);
Json pvm_to_json(const std::vector<CMat>& pvm);

// {"T": [[...]]} entries rational-friendly
StochasticMatrix stochastic_from_json(const Json& j);
Json stochastic_to_json(const StochasticMatrix& t);

// {"P": [...]} and optional {"blocks": [[int...]]} in the same object
FiniteProbSpace prob_from_json(const Json& j);
BlockPartition blocks_from_json(const Json& j);

// values_from_json: {"values": [...]} or a bare array; values_to_json emits
// the bare array form. Exact rationals.
RatVec values_from_json(const Json& j);
Json values_to_json(const RatVec& v);

StateVector state_from_json(const Json& j);
Json state_to_json(const StateVector& s);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace effalg
