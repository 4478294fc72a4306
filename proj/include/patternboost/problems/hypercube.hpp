#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

inline constexpr int kMaxCubeDimension = 12;

constexpr std::size_t cube_edge_slots(int d) { return static_cast<std::size_t>(d) << (d - 1); }

/// Edge slot of (v, v ^ (1 << coord)), identified through its lower endpoint.
std::size_t cube_edge_index(int d, std::uint32_t v, int coord);
/// Lower endpoint and flipped coordinate of an edge slot.
std::pair<std::uint32_t, int> cube_edge_at(int d, std::size_t index);

/// Spanning subgraph of the d-cube: one bit per cube edge.
struct CubeSubgraph {
  int d = 0;
  std::vector<std::uint8_t> edge_bits;

  static CubeSubgraph empty(int d);
  static CubeSubgraph full(int d);
  static CubeSubgraph from_payload(int d, const Payload& payload);
  /// Throws std::invalid_argument when u, v are not cube neighbours.
  void set_edge(std::uint32_t u, std::uint32_t v, bool on);
  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  std::size_t edge_count() const;

  friend bool operator==(const CubeSubgraph&, const CubeSubgraph&) = default;
};

/// Largest BFS distance over all vertex pairs, or -1 when disconnected.
int cube_subgraph_diameter(const CubeSubgraph& s);

/// Connected on all 2^d vertices with diameter exactly d.
bool cube_diameter_ok(const CubeSubgraph& s);

/// -(edge count) for valid subgraphs, kInvalidScore otherwise.
Score score_cube(const CubeSubgraph& s);

/// Adds random cube edges until valid, then removes random edges while validity holds.
CubeSubgraph local_search_cube(CubeSubgraph s, Rng& rng);

/// 2^d + C(d, floor(d/2)) - 2: edge count of the classical two-antipode construction.
std::size_t classical_cube_edge_count(int d);

}  // namespace pb::problems
