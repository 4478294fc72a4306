#include "patternboost/problems/graph.hpp"

#include <stdexcept>
#include <string>

namespace pb::problems {

std::pair<int, int> edge_endpoints(std::size_t index, int n) {
  int i = 0;
  std::size_t row_len = static_cast<std::size_t>(n - 1);
  while (index >= row_len) {
    index -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + static_cast<int>(index)};
}

GraphBits GraphBits::empty(int n) {
  if (n < 1 || n > kMaxGraphVertices)
    throw std::invalid_argument("graph size must be in [1, 64], got " + std::to_string(n));
  return GraphBits{n, std::vector<std::uint8_t>(edge_slots(n), 0)};
}

GraphBits GraphBits::complete(int n) {
  auto g = empty(n);
  std::fill(g.bits.begin(), g.bits.end(), 1);
  return g;
}

GraphBits GraphBits::from_payload(int n, const Payload& payload) {
  if (payload.size() != edge_slots(n))
    throw ShapeError("graph payload has " + std::to_string(payload.size()) + " bits, expected " +
                     std::to_string(edge_slots(n)));
  for (auto b : payload)
    if (b > 1) throw ShapeError("graph payload symbol must be 0 or 1");
  auto g = empty(n);
  g.bits = payload;
  return g;
}

bool GraphBits::has_edge(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return bits[edge_index(i, j, n)] != 0;
}

void GraphBits::set_edge(int i, int j, bool on) {
  if (i > j) std::swap(i, j);
  bits[edge_index(i, j, n)] = on ? 1 : 0;
}

std::size_t GraphBits::edge_count() const {
  std::size_t c = 0;
  for (auto b : bits) c += b;
  return c;
}

Adjacency::Adjacency(const GraphBits& g) : n_(g.n), rows_(static_cast<std::size_t>(g.n), 0) {
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++idx)
      if (g.bits[idx]) add(i, j);
}

GraphBits Adjacency::to_bits() const {
  auto g = GraphBits::empty(n_);
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++idx) g.bits[idx] = has(i, j) ? 1 : 0;
  return g;
}

}  // namespace pb::problems
