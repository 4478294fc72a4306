#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "patternboost/core/construction.hpp"

namespace pb::problems {

/// Graphs on at most this many vertices (one 64-bit adjacency row per vertex).
inline constexpr int kMaxGraphVertices = 64;

constexpr std::size_t edge_slots(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

/// Position of edge {i, j}, i < j, in the row-major strict upper triangle.
constexpr std::size_t edge_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> edge_endpoints(std::size_t index, int n);

/// n(n-1)/2 bits, row-major strict upper triangle of the adjacency matrix.
struct GraphBits {
  int n = 0;
  std::vector<std::uint8_t> bits;

  static GraphBits empty(int n);
  static GraphBits complete(int n);
  /// Throws ShapeError on a length mismatch or a symbol other than 0/1.
  static GraphBits from_payload(int n, const Payload& payload);

  bool has_edge(int i, int j) const;
  void set_edge(int i, int j, bool on);
  std::size_t edge_count() const;

  friend bool operator==(const GraphBits&, const GraphBits&) = default;
};

/// Bitset adjacency for fast neighbourhood intersections.
class Adjacency {
 public:
  explicit Adjacency(const GraphBits& g);

  int n() const { return n_; }
  std::uint64_t row(int v) const { return rows_[v]; }
  bool has(int u, int v) const { return (rows_[u] >> v) & 1U; }
  void add(int u, int v) {
    rows_[u] |= bit(v);
    rows_[v] |= bit(u);
  }
  void remove(int u, int v) {
    rows_[u] &= ~bit(v);
    rows_[v] &= ~bit(u);
  }
  GraphBits to_bits() const;

  static constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

 private:
  int n_;
  std::vector<std::uint64_t> rows_;
};

template <class F>
void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask) {
    f(std::countr_zero(mask));
    mask &= mask - 1;
  }
}

}  // namespace pb::problems
