#include "patternboost/problems/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > kMaxCubeDimension)
    throw std::invalid_argument("cube dimension must be in [1, " + std::to_string(kMaxCubeDimension) + "]");
}

class CubeGraph {
 public:
  explicit CubeGraph(const CubeSubgraph& s) : d_(s.d), adj_(std::size_t{1} << s.d, 0) {
    for (std::size_t i = 0; i < s.edge_bits.size(); ++i)
      if (s.edge_bits[i]) toggle(i);
  }
  void toggle(std::size_t index) {
    auto [v, coord] = cube_edge_at(d_, index);
    adj_[v] ^= 1U << coord;
    adj_[v ^ (1U << coord)] ^= 1U << coord;
  }
  // -1 when disconnected. Stops early once a distance exceeds `limit`.
  int diameter(int limit) const {
    const std::uint32_t nv = static_cast<std::uint32_t>(adj_.size());
    std::vector<int> dist(nv);
    std::vector<std::uint32_t> queue(nv);
    int diam = 0;
    for (std::uint32_t src = 0; src < nv; ++src) {
      std::fill(dist.begin(), dist.end(), -1);
      std::size_t head = 0, tail = 0;
      queue[tail++] = src;
      dist[src] = 0;
      while (head < tail) {
        std::uint32_t v = queue[head++];
        std::uint32_t nbrs = adj_[v];
        while (nbrs) {
          int c = std::countr_zero(nbrs);
          nbrs &= nbrs - 1;
          std::uint32_t w = v ^ (1U << c);
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            queue[tail++] = w;
          }
        }
      }
      if (tail != nv) return -1;
      diam = std::max(diam, dist[queue[tail - 1]]);
      if (diam > limit) return diam;
    }
    return diam;
  }

 private:
  int d_;
  std::vector<std::uint32_t> adj_;  // bit c set: edge along coordinate c
};

}  // namespace

std::size_t cube_edge_index(int d, std::uint32_t v, int coord) {
  // Remove bit `coord` from v; the remaining d-1 bits index the edge within its direction.
  const std::uint32_t low = v & ((1U << coord) - 1);
  const std::uint32_t high = (v >> (coord + 1)) << coord;
  return (static_cast<std::size_t>(coord) << (d - 1)) + (high | low);
}

std::pair<std::uint32_t, int> cube_edge_at(int d, std::size_t index) {
  const int coord = static_cast<int>(index >> (d - 1));
  const std::uint32_t rest = static_cast<std::uint32_t>(index & ((std::size_t{1} << (d - 1)) - 1));
  const std::uint32_t low = rest & ((1U << coord) - 1);
  const std::uint32_t high = (rest >> coord) << (coord + 1);
  return {high | low, coord};
}

CubeSubgraph CubeSubgraph::empty(int d) {
  check_dimension(d);
  return CubeSubgraph{d, std::vector<std::uint8_t>(cube_edge_slots(d), 0)};
}

CubeSubgraph CubeSubgraph::full(int d) {
  auto s = empty(d);
  std::fill(s.edge_bits.begin(), s.edge_bits.end(), 1);
  return s;
}

CubeSubgraph CubeSubgraph::from_payload(int d, const Payload& payload) {
  check_dimension(d);
  if (payload.size() != cube_edge_slots(d))
    throw ShapeError("cube payload has " + std::to_string(payload.size()) + " bits, expected " +
                     std::to_string(cube_edge_slots(d)));
  for (auto b : payload)
    if (b > 1) throw ShapeError("cube payload symbol must be 0 or 1");
  return CubeSubgraph{d, payload};
}

void CubeSubgraph::set_edge(std::uint32_t u, std::uint32_t v, bool on) {
  const std::uint32_t diff = u ^ v;
  if (std::popcount(diff) != 1 || (u >> d) || (v >> d))
    throw std::invalid_argument("(" + std::to_string(u) + ", " + std::to_string(v) + ") is not a cube edge");
  edge_bits[cube_edge_index(d, std::min(u, v), std::countr_zero(diff))] = on ? 1 : 0;
}

bool CubeSubgraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  const std::uint32_t diff = u ^ v;
  if (std::popcount(diff) != 1) return false;
  return edge_bits[cube_edge_index(d, std::min(u, v), std::countr_zero(diff))] != 0;
}

std::size_t CubeSubgraph::edge_count() const {
  return static_cast<std::size_t>(std::count(edge_bits.begin(), edge_bits.end(), std::uint8_t{1}));
}

int cube_subgraph_diameter(const CubeSubgraph& s) { return CubeGraph(s).diameter(1 << 30); }

bool cube_diameter_ok(const CubeSubgraph& s) {
  int diam = CubeGraph(s).diameter(s.d);
  return diam == s.d;
}

Score score_cube(const CubeSubgraph& s) {
  if (!cube_diameter_ok(s)) return kInvalidScore;
  return -static_cast<Score>(s.edge_count());
}

CubeSubgraph local_search_cube(CubeSubgraph s, Rng& rng) {
  CubeGraph g(s);
  auto valid = [&] { return g.diameter(s.d) == s.d; };

  if (!valid()) {
    std::vector<std::size_t> absent;
    for (std::size_t i = 0; i < s.edge_bits.size(); ++i)
      if (!s.edge_bits[i]) absent.push_back(i);
    std::shuffle(absent.begin(), absent.end(), rng);
    for (std::size_t i : absent) {
      s.edge_bits[i] = 1;
      g.toggle(i);
      if (valid()) break;
    }
  }

  // Distances only grow under deletion, so an edge that cannot be removed now never
  // becomes removable later: one pass in random order reaches a minimal subgraph.
  std::vector<std::size_t> present;
  for (std::size_t i = 0; i < s.edge_bits.size(); ++i)
    if (s.edge_bits[i]) present.push_back(i);
  std::shuffle(present.begin(), present.end(), rng);
  for (std::size_t i : present) {
    g.toggle(i);
    if (valid()) {
      s.edge_bits[i] = 0;
    } else {
      g.toggle(i);
    }
  }
  return s;
}

std::size_t classical_cube_edge_count(int d) {
  std::size_t binom = 1;
  for (int i = 0; i < d / 2; ++i) binom = binom * static_cast<std::size_t>(d - i) / static_cast<std::size_t>(i + 1);
  return (std::size_t{1} << d) + binom - 2;
}

}  // namespace pb::problems
