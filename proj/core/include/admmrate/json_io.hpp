#ifndef ADMMRATE_JSON_IO_HPP
#define ADMMRATE_JSON_IO_HPP

#include "admmrate/bounds.hpp"
#include "admmrate/engine.hpp"
#include "admmrate/lasso.hpp"
#include "admmrate/locus.hpp"
#include "admmrate/problem.hpp"

#include <json.hpp>

#include <complex>
#include <vector>

namespace admmrate {

using nlohmann::json;

// Matrices are row-major arrays of arrays, vectors plain arrays.
json to_json(const Matrix& m);
json to_json(const Vector& v);
Matrix matrix_from_json(const json& j);
Vector vector_from_json(const json& j);

json to_json(const std::vector<std::complex<double>>& eigs);
std::vector<std::complex<double>> eigs_from_json(const json& j);

// Problem files:
// { "A1": [[...]], "A2": [[...]], "b": [...], "E": [[...]],
//   "f1": {"kind": "quadratic", "Q": [[...]], "c": [...]},
//   "f2": {"kind": "weighted_l1", "w": [...]} }
// piecewise kind: {"kind": "piecewise_linear",
//                  "pieces": [{"breakpoints": [...], "slopes": [...]}, ...]}
json to_json(const SeparableFunction& f);
SeparableFunction function_from_json(const json& j);

json to_json(const SplitProblem& p);
SplitProblem problem_from_json(const json& j);

json to_json(const RunResult& r, bool include_history);

json to_json(const DirectionBox& b);
json to_json(const AlphaBox& box);
AlphaBox alpha_box_from_json(const json& j);

json to_json(const LocusParams& lp);
json to_json(const BoundSpectrum& bs);
json to_json(const MuResult& mu);
json to_json(const RateReport& rep);

} // namespace admmrate

#endif
