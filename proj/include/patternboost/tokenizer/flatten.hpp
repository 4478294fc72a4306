#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "patternboost/problems/graph.hpp"

namespace pb::tokenizer {

/// A token or symbol stream that does not describe a construction.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlattenOptions {
  bool delimiters = false;
  /// Also emit the (always zero) diagonal, one extra symbol at the start of every row,
  /// which gives n rows instead of n - 1.
  bool include_diagonal = false;
};

/// Row-major upper triangle of the adjacency matrix as '0'/'1', with a ',' closing each
/// row when delimiters are on.
std::string flatten_graph(const problems::GraphBits& g, FlattenOptions opt = {});

/// Inverse of flatten_graph; throws DecodeError on wrong row lengths, a missing or stray
/// delimiter, a non-zero diagonal, or a foreign symbol.
problems::GraphBits unflatten_graph(std::string_view s, int n, FlattenOptions opt = {});

}  // namespace pb::tokenizer
