#pragma once

// Exhaustive references for the fast incremental checks in problems/. Nothing here
// calls into the problem implementations it is meant to check.

#include <array>
#include <cstdint>
#include <vector>

#include "patternboost/problems/box_cover.hpp"
#include "patternboost/problems/graph.hpp"
#include "patternboost/problems/hypercube.hpp"
#include "patternboost/problems/isosceles.hpp"
#include "patternboost/problems/pattern312.hpp"
#include "patternboost/problems/sphere.hpp"
#include "patternboost/problems/sperner.hpp"

namespace pb::oracles {

/// Triangles by enumerating vertex triples.
std::uint64_t count_triangles_naive(const problems::GraphBits& g);
/// 4-cycles as subgraphs, by enumerating vertex quadruples and their three cyclic orders.
std::uint64_t count_c4_naive(const problems::GraphBits& g);

/// Six nested loops over rows and columns.
bool contains_312_naive(const problems::BinaryMatrix& m);
/// Sum over all permutations; n <= 10.
std::uint64_t permanent_naive(const problems::BinaryMatrix& m);

/// Isosceles (possibly flat) triangles among the listed points, any vertex as apex.
std::uint64_t count_isosceles_naive(const std::vector<problems::Point2>& pts);

/// 5x5 determinant of the rows (x, y, z, x^2+y^2+z^2, 1) by cofactor expansion in 128 bits.
/// Zero iff the five points lie on one sphere or one plane.
__int128 cosphere_det_naive(const std::array<problems::Point3, 5>& p);
/// Every 5-subset checked with cosphere_det_naive.
bool is_no5_sphere_naive(const std::vector<problems::Point3>& pts);

/// Diameter by Floyd-Warshall over all 2^d vertices; -1 when disconnected.
int cube_diameter_naive(const problems::CubeSubgraph& s);

/// Longest chain A1 < A2 < ... (proper inclusions) by memoised search over the sets.
int longest_chain_naive(const std::vector<problems::SetMask>& family);
/// No member of one family is contained in a member of another.
bool is_cross_sperner_naive(const std::vector<std::vector<problems::SetMask>>& families);

/// Coverage of every point of {0,1,2}^d by direct membership tests.
std::vector<int> coverage_naive(const problems::BoxCover& c);

struct StructureCounts {
  std::uint64_t triangles = 0;
  std::uint64_t four_cycles = 0;
};
StructureCounts count_structures(const problems::GraphBits& g);

struct CosphericalCount {
  std::uint64_t degenerate = 0;  // 5-subsets on a common sphere or plane
  std::uint64_t total = 0;       // C(n^3, 5)
};
/// Exact count over [n]^3, split across `workers` threads by the smallest point. Uses
/// the active linear-form kernel; the reduction order is fixed, so the result does not
/// depend on the worker count.
CosphericalCount count_cospherical(int n, int workers = 1);
/// Same count with one cosphere_det_naive call per 5-subset; for cross-checks.
CosphericalCount count_cospherical_naive(int n);

}  // namespace pb::oracles
