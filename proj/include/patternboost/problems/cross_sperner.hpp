#pragma once

#include <cstdint>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"
#include "patternboost/problems/sperner.hpp"

namespace pb::problems {

inline constexpr int kMaxCrossFamilies = 9;

/// k families of subsets of {1..n}. owner[s] is the 1-based family holding s, or 0.
/// A set lying in two families violates the cross condition, so one owner suffices.
struct SetFamilyTuple {
  int n = 0;
  int k = 0;
  std::vector<std::uint8_t> owner;

  static SetFamilyTuple empty(int n, int k);
  static SetFamilyTuple from_payload(int n, int k, const Payload& payload);
  /// Throws std::invalid_argument when a set appears twice, in one family or across two.
  static SetFamilyTuple from_families(int n, const std::vector<std::vector<SetMask>>& families);

  std::vector<std::vector<SetMask>> families() const;
  std::vector<std::size_t> sizes() const;

  friend bool operator==(const SetFamilyTuple&, const SetFamilyTuple&) = default;
};

/// No A in F_i, B in F_j, i != j, with A a subset of B.
bool is_cross_sperner(const SetFamilyTuple& t);
bool is_maximal_cross_sperner(const SetFamilyTuple& t);

/// Repeatedly deletes B for the lexicographically least violating (i, A, j, B).
SetFamilyTuple repair_cross_sperner(SetFamilyTuple t);

/// Product of family sizes after repair. Throws std::overflow_error past 63 bits.
Score score_cross_sperner(const SetFamilyTuple& t);

/// Repair, then random (set, family) additions while the tuple stays cross-Sperner.
SetFamilyTuple local_search_cross_sperner(SetFamilyTuple t, Rng& rng);

}  // namespace pb::problems
