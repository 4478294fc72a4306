#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

/// Ground sets up to this size ({1..n} as n-bit masks, element i is bit i-1).
inline constexpr int kMaxGroundSet = 20;

using SetMask = std::uint32_t;

/// A family of subsets of {1..n}, as a membership bit per mask (2^n entries).
struct SetFamily {
  int n = 0;
  std::vector<std::uint8_t> member;

  static SetFamily empty(int n);
  static SetFamily from_payload(int n, const Payload& payload);
  /// Throws std::invalid_argument on masks outside 2^n or repeated sets.
  static SetFamily from_sets(int n, const std::vector<SetMask>& sets);

  bool contains(SetMask s) const { return member[s] != 0; }
  std::vector<SetMask> sets() const;
  std::size_t size() const;

  friend bool operator==(const SetFamily&, const SetFamily&) = default;
};

/// Longest strictly nested chains through each subset of {1..n}: below[s] counts family
/// members strictly inside s, above[s] members strictly containing s.
struct ChainProfile {
  std::vector<int> below;
  std::vector<int> above;
  int longest = 0;

  /// Longest chain of the family with s added (s need not be absent).
  int through(SetMask s) const { return below[s] + 1 + above[s]; }
};

ChainProfile chain_profile(const SetFamily& f);

/// Length of the longest chain in the family, with `extra` added when given.
int longest_chain(const SetFamily& f, std::optional<SetMask> extra = std::nullopt);

bool is_k_sperner(const SetFamily& f, int k);
/// k-Sperner, and adding any absent subset creates a chain of k + 1 sets.
bool is_saturated_k_sperner(const SetFamily& f, int k);

/// Absent subsets whose addition keeps every chain at most k long.
std::size_t count_addable(const SetFamily& f, int k);

/// -|F| when F is saturated k-Sperner, -|F| - (#addable sets) otherwise.
Score score_sperner(const SetFamily& f, int k);

/// Deletes a random member of a longest chain until k-Sperner, then adds random addable
/// sets until saturated.
SetFamily local_search_sperner(SetFamily f, int k, Rng& rng);

}  // namespace pb::problems
