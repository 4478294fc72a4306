#pragma once

#include "patternboost/core/rng.hpp"
#include "patternboost/problems/graph.hpp"

namespace pb::problems {

std::size_t count_c4(const GraphBits& g);

/// edges - 2 * (#4-cycles); equals the edge count on C4-free graphs.
Score score_c4(const GraphBits& g);

bool is_c4_free(const GraphBits& g);
bool is_maximal_c4_free(const GraphBits& g);

/// Deletes a uniformly random edge among those on the most 4-cycles until none are
/// left, then adds random admissible edges until the graph is maximal.
GraphBits local_search_c4(GraphBits g, Rng& rng);

}  // namespace pb::problems
