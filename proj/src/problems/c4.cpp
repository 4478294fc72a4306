#include "patternboost/problems/c4.hpp"

#include <algorithm>
#include <bit>

namespace pb::problems {

namespace {

// 4-cycles u-v-x-y-u through the edge {u, v}.
std::size_t c4_through(const Adjacency& adj, int u, int v) {
  std::size_t c = 0;
  const std::uint64_t ends = adj.row(u) & ~Adjacency::bit(v);
  for_each_bit(adj.row(v) & ~Adjacency::bit(u),
               [&](int x) { c += static_cast<std::size_t>(std::popcount(adj.row(x) & ends)); });
  return c;
}

// Adding {u, v} closes a 4-cycle iff a path of length 3 joins u and v.
bool can_add(const Adjacency& adj, int u, int v) {
  const std::uint64_t ends = adj.row(u) & ~Adjacency::bit(v);
  bool ok = true;
  for_each_bit(adj.row(v) & ~Adjacency::bit(u), [&](int x) {
    if (adj.row(x) & ends) ok = false;
  });
  return ok;
}

std::size_t total_c4(const Adjacency& adj) {
  std::size_t sum = 0;
  for (int u = 0; u < adj.n(); ++u)
    for_each_bit(adj.row(u) & ~((Adjacency::bit(u) << 1) - 1), [&](int v) { sum += c4_through(adj, u, v); });
  return sum / 4;
}

}  // namespace

std::size_t count_c4(const GraphBits& g) { return total_c4(Adjacency(g)); }

Score score_c4(const GraphBits& g) {
  return static_cast<Score>(g.edge_count()) - 2 * static_cast<Score>(count_c4(g));
}

bool is_c4_free(const GraphBits& g) { return count_c4(g) == 0; }

bool is_maximal_c4_free(const GraphBits& g) {
  Adjacency adj(g);
  if (total_c4(adj) != 0) return false;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (!adj.has(u, v) && can_add(adj, u, v)) return false;
  return true;
}

GraphBits local_search_c4(GraphBits g, Rng& rng) {
  Adjacency adj(g);
  const int n = g.n;

  std::vector<std::pair<int, int>> worst;
  for (;;) {
    std::size_t best = 0;
    worst.clear();
    for (int u = 0; u < n; ++u)
      for_each_bit(adj.row(u) & ~((Adjacency::bit(u) << 1) - 1), [&](int v) {
        std::size_t c = c4_through(adj, u, v);
        if (c > best) {
          best = c;
          worst.clear();
        }
        if (c == best && c > 0) worst.emplace_back(u, v);
      });
    if (best == 0) break;
    auto [u, v] = worst[uniform_index(rng, worst.size())];
    adj.remove(u, v);
  }

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
