#pragma once

#include "patternboost/core/rng.hpp"
#include "patternboost/problems/graph.hpp"

namespace pb::problems {

std::size_t count_triangles(const GraphBits& g);

/// edges - 2 * triangles. Deleting any edge of a triangle raises it, so maximizers
/// are triangle-free.
Score score_triangle(const GraphBits& g);

bool is_triangle_free(const GraphBits& g);
/// Triangle-free and no single edge can be added without creating a triangle.
bool is_maximal_triangle_free(const GraphBits& g);

/// Down-up search: while triangles remain, delete a uniformly random edge among those
/// lying in the most triangles; then add uniformly random admissible edges until none
/// is left.
GraphBits local_search_triangle(GraphBits g, Rng& rng);

}  // namespace pb::problems
