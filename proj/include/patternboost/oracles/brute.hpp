#pragma once

#include <string>

#include "patternboost/core/construction.hpp"
#include "patternboost/problems/problem.hpp"

namespace pb::oracles {

/// Largest size parameter brute_best accepts for the problem (graph vertices, matrix
/// side, grid side, cube dimension, ground set or box dimension). For cross_sperner it
/// also depends on k.
int brute_bound(ProblemId id, const problems::ProblemParams& params);

/// Exact optimum of the problem's score over all valid constructions, found by
/// exhaustive search or branch and bound. Validity is decided by the naive checks in
/// counts.hpp. Throws std::domain_error when params.n exceeds brute_bound.
Score brute_best(ProblemId id, const problems::ProblemParams& params);

}  // namespace pb::oracles
