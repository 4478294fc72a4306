#include "patternboost/problems/cross_sperner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

void check_shape(int n, int k) {
  if (n < 0 || n > kMaxGroundSet)
    throw std::invalid_argument("ground set size must be in [0, " + std::to_string(kMaxGroundSet) + "]");
  if (k < 1 || k > kMaxCrossFamilies)
    throw std::invalid_argument("family count must be in [1, " + std::to_string(kMaxCrossFamilies) + "]");
}

constexpr bool subset(SetMask a, SetMask b) { return (a & ~b) == 0; }

// Whether s can join family f: no member of another family is comparable with s.
bool can_join(const SetFamilyTuple& t, SetMask s, int f) {
  for (SetMask x = 0; x < t.owner.size(); ++x) {
    const int o = t.owner[x];
    if (o == 0 || o == f) continue;
    if (subset(x, s) || subset(s, x)) return false;
  }
  return true;
}

}  // namespace

SetFamilyTuple SetFamilyTuple::empty(int n, int k) {
  check_shape(n, k);
  return SetFamilyTuple{n, k, std::vector<std::uint8_t>(std::size_t{1} << n, 0)};
}

SetFamilyTuple SetFamilyTuple::from_payload(int n, int k, const Payload& payload) {
  check_shape(n, k);
  if (payload.size() != (std::size_t{1} << n))
    throw ShapeError("cross-Sperner payload has " + std::to_string(payload.size()) + " entries, expected " +
                     std::to_string(std::size_t{1} << n));
  for (auto b : payload)
    if (b > k) throw ShapeError("cross-Sperner payload symbol above the family count");
  return SetFamilyTuple{n, k, payload};
}

SetFamilyTuple SetFamilyTuple::from_families(int n, const std::vector<std::vector<SetMask>>& families) {
  auto t = empty(n, static_cast<int>(families.size()));
  for (std::size_t i = 0; i < families.size(); ++i)
    for (SetMask s : families[i]) {
      if (s >= t.owner.size()) throw std::invalid_argument("set mask " + std::to_string(s) + " outside 2^n");
      if (t.owner[s]) throw std::invalid_argument("set mask " + std::to_string(s) + " listed twice");
      t.owner[s] = static_cast<std::uint8_t>(i + 1);
    }
  return t;
}

std::vector<std::vector<SetMask>> SetFamilyTuple::families() const {
  std::vector<std::vector<SetMask>> out(static_cast<std::size_t>(k));
  for (SetMask s = 0; s < owner.size(); ++s)
    if (owner[s]) out[owner[s] - 1U].push_back(s);
  return out;
}

std::vector<std::size_t> SetFamilyTuple::sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(k), 0);
  for (auto o : owner)
    if (o) ++out[o - 1U];
  return out;
}

bool is_cross_sperner(const SetFamilyTuple& t) {
  for (SetMask a = 0; a < t.owner.size(); ++a) {
    if (!t.owner[a]) continue;
    for (SetMask b = 0; b < t.owner.size(); ++b)
      if (t.owner[b] && t.owner[b] != t.owner[a] && subset(a, b)) return false;
  }
  return true;
}

bool is_maximal_cross_sperner(const SetFamilyTuple& t) {
  if (!is_cross_sperner(t)) return false;
  for (SetMask s = 0; s < t.owner.size(); ++s)
    if (!t.owner[s])
      for (int f = 1; f <= t.k; ++f)
        if (can_join(t, s, f)) return false;
  return true;
}

SetFamilyTuple repair_cross_sperner(SetFamilyTuple t) {
  // Deleting B only removes violations, so every tuple already passed stays clean and
  // the scan resumes where it stopped instead of restarting.
  for (int i = 1; i <= t.k; ++i)
    for (SetMask a = 0; a < t.owner.size(); ++a) {
      if (t.owner[a] != i) continue;
      for (int j = 1; j <= t.k; ++j) {
        if (j == i) continue;
        for (SetMask b = a; b < t.owner.size(); ++b)
          if (t.owner[b] == j && subset(a, b)) t.owner[b] = 0;
      }
    }
  return t;
}

Score score_cross_sperner(const SetFamilyTuple& t) {
  const auto repaired = repair_cross_sperner(t);
  Score product = 1;
  for (std::size_t s : repaired.sizes()) {
    if (s != 0 && product > std::numeric_limits<Score>::max() / static_cast<Score>(s))
      throw std::overflow_error("cross-Sperner product exceeds 63 bits");
    product *= static_cast<Score>(s);
  }
  return product;
}

SetFamilyTuple local_search_cross_sperner(SetFamilyTuple t, Rng& rng) {
  t = repair_cross_sperner(std::move(t));
  // Adding sets only shrinks the admissible (set, family) pairs, so one random pass
  // reaches a maximal tuple.
  std::vector<std::pair<SetMask, int>> candidates;
  for (SetMask s = 0; s < t.owner.size(); ++s)
    if (!t.owner[s])
      for (int f = 1; f <= t.k; ++f) candidates.emplace_back(s, f);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (auto [s, f] : candidates)
    if (!t.owner[s] && can_join(t, s, f)) t.owner[s] = static_cast<std::uint8_t>(f);
  return t;
}

}  // namespace pb::problems
