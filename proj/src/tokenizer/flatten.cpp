#include "patternboost/tokenizer/flatten.hpp"

namespace pb::tokenizer {

using problems::GraphBits;

std::string flatten_graph(const GraphBits& g, FlattenOptions opt) {
  std::string out;
  out.reserve(static_cast<std::size_t>(g.n) * (g.n + 3) / 2);
  const int rows = opt.include_diagonal ? g.n : g.n - 1;
  for (int i = 0; i < rows; ++i) {
    if (opt.include_diagonal) out.push_back('0');
    for (int j = i + 1; j < g.n; ++j) out.push_back(g.has_edge(i, j) ? '1' : '0');
    if (opt.delimiters) out.push_back(',');
  }
  return out;
}

GraphBits unflatten_graph(std::string_view s, int n, FlattenOptions opt) {
  auto g = GraphBits::empty(n);
  const int rows = opt.include_diagonal ? n : n - 1;
  std::size_t pos = 0;
  auto next = [&](int row) {
    if (pos >= s.size()) throw DecodeError("stream ends inside row " + std::to_string(row));
    return s[pos++];
  };
  for (int i = 0; i < rows; ++i) {
    if (opt.include_diagonal && next(i) != '0') throw DecodeError("row " + std::to_string(i) + " has a nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      char c = next(i);
      if (c != '0' && c != '1')
        throw DecodeError("row " + std::to_string(i) + " is " + (c == ',' ? "too short" : "malformed"));
      g.set_edge(i, j, c == '1');
    }
    if (opt.delimiters && next(i) != ',') throw DecodeError("row " + std::to_string(i) + " is too long");
  }
  if (pos != s.size()) throw DecodeError("trailing symbols after the last row");
  return g;
}

}  // namespace pb::tokenizer
