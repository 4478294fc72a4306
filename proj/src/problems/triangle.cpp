#include "patternboost/problems/triangle.hpp"

#include <algorithm>
#include <bit>

namespace pb::problems {

namespace {

std::size_t triangles(const Adjacency& adj) {
  std::size_t t = 0;
  for (int u = 0; u < adj.n(); ++u) {
    std::uint64_t higher = adj.row(u) & ~((Adjacency::bit(u) << 1) - 1);
    for_each_bit(higher, [&](int v) {
      std::uint64_t above_v = ~((Adjacency::bit(v) << 1) - 1);
      t += static_cast<std::size_t>(std::popcount(adj.row(u) & adj.row(v) & above_v));
    });
  }
  return t;
}

bool can_add(const Adjacency& adj, int u, int v) { return (adj.row(u) & adj.row(v)) == 0; }

}  // namespace

std::size_t count_triangles(const GraphBits& g) { return triangles(Adjacency(g)); }

Score score_triangle(const GraphBits& g) {
  return static_cast<Score>(g.edge_count()) - 2 * static_cast<Score>(count_triangles(g));
}

bool is_triangle_free(const GraphBits& g) { return count_triangles(g) == 0; }

bool is_maximal_triangle_free(const GraphBits& g) {
  Adjacency adj(g);
  if (triangles(adj) != 0) return false;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (!adj.has(u, v) && can_add(adj, u, v)) return false;
  return true;
}

GraphBits local_search_triangle(GraphBits g, Rng& rng) {
  Adjacency adj(g);
  const int n = g.n;

  std::vector<std::pair<int, int>> worst;
  for (;;) {
    int best = 0;
    worst.clear();
    for (int u = 0; u < n; ++u)
      for_each_bit(adj.row(u) & ~((Adjacency::bit(u) << 1) - 1), [&](int v) {
        int t = std::popcount(adj.row(u) & adj.row(v));
        if (t > best) {
          best = t;
          worst.clear();
        }
        if (t == best && t > 0) worst.emplace_back(u, v);
      });
    if (best == 0) break;
    auto [u, v] = worst[uniform_index(rng, worst.size())];
    adj.remove(u, v);
  }

  // Admissibility only shrinks as edges are added, so one pass over a random order
  // of the non-edges picks uniformly among admissible edges at every step and ends
  // at a maximal graph.
  std::vector<std::pair<int, int>> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!adj.has(u, v)) candidates.emplace_back(u, v);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (auto [u, v] : candidates)
    if (can_add(adj, u, v)) adj.add(u, v);

  return adj.to_bits();
}

}  // namespace pb::problems
