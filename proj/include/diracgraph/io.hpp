// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "json.hpp"

#include "diracgraph/problem.hpp"
#include "diracgraph/solver.hpp"
#include "diracgraph/star.hpp"
#include "diracgraph/transmission.hpp"

namespace diracgraph
{

using Json = nlohmann::ordered_json;

// Scalars are encoded as a plain number (real) or a two-element array
// [re, im]; matrices as arrays of rows.
Complex parse_complex(const Json& j, const std::string& where);
Matrix parse_matrix(const Json& j, const std::string& where);
Json complex_to_json(Complex z);
Json matrix_to_json(const Matrix& m);

// Problem files:
// {
//   "mass": 1.0,
//   "vertices": ["v1", ...],
//   "edges": [
//     {"id":"j1","kind":"internal","from":"v1","to":"v2","a":0.0,"b":1.0},
//     {"id":"j2","kind":"external","vertex":"v2","orientation":-1,"endpoint":0.0}
//   ],
//   "conditions": {"scope":"local","blocks":[{"vertex":"v1","A":[...],"B":[...]}]}
//              or {"scope":"global","A":[...],"B":[...]}
// }
// Local blocks are indexed by the vertex's incident edges in global edge
// order; the numbering permutation W is derived from the graph.
MetricGraph parse_graph(const Json& j);
SpectralProblem parse_problem(const Json& j);
SpectralProblem load_problem(const std::string& path);
Json problem_to_json(const SpectralProblem& p);

Json essential_to_json(const EssentialSpectrumResult& e);
Json report_to_json(const SpectralReport& report);
Json star_to_json(const StarSpectrum& s);
Json self_adjointness_to_json(const SelfAdjointnessReport& r);

}  // namespace diracgraph
