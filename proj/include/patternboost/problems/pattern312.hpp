#pragma once

#include <cstdint>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

/// n x n 0/1 matrix, row-major.
struct BinaryMatrix {
  int n = 0;
  std::vector<std::uint8_t> a;

  static BinaryMatrix zeros(int n);
  static BinaryMatrix identity(int n);
  static BinaryMatrix from_payload(int n, const Payload& payload);
  /// Rows as strings of '0'/'1'.
  static BinaryMatrix from_rows(const std::vector<std::string>& rows);

  std::uint8_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
  std::uint8_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
  std::size_t ones() const;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;
};

/// True iff rows r1<r2<r3 and columns c1<c2<c3 exist with ones at (r1,c3), (r2,c1), (r3,c2).
bool contains_312(const BinaryMatrix& m);

/// Number of 312 occurrences.
std::size_t count_312(const BinaryMatrix& m);

/// For every cell, the number of 312 occurrences using that one (0 for zero cells).
std::vector<std::size_t> count_312_per_cell(const BinaryMatrix& m);

/// Whether setting the zero cell (r, c) to one would create a 312 occurrence.
bool would_create_312(const BinaryMatrix& m, int r, int c);

bool is_maximal_312_free(const BinaryMatrix& m);

/// Greedily deletes a random one among those in the most 312 occurrences until the
/// matrix is 312-free, then sets random zero cells to one while that stays 312-free.
BinaryMatrix local_search_312(BinaryMatrix m, Rng& rng);

}  // namespace pb::problems
