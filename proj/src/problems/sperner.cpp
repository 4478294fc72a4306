#include "patternboost/problems/sperner.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

void check_ground(int n) {
  if (n < 0 || n > kMaxGroundSet)
    throw std::invalid_argument("ground set size must be in [0, " + std::to_string(kMaxGroundSet) + "]");
}

}  // namespace

SetFamily SetFamily::empty(int n) {
  check_ground(n);
  return SetFamily{n, std::vector<std::uint8_t>(std::size_t{1} << n, 0)};
}

SetFamily SetFamily::from_payload(int n, const Payload& payload) {
  check_ground(n);
  if (payload.size() != (std::size_t{1} << n))
    throw ShapeError("family payload has " + std::to_string(payload.size()) + " entries, expected " +
                     std::to_string(std::size_t{1} << n));
  for (auto b : payload)
    if (b > 1) throw ShapeError("family payload symbol must be 0 or 1");
  return SetFamily{n, payload};
}

SetFamily SetFamily::from_sets(int n, const std::vector<SetMask>& sets) {
  auto f = empty(n);
  for (SetMask s : sets) {
    if (s >= f.member.size()) throw std::invalid_argument("set mask " + std::to_string(s) + " outside 2^n");
    if (f.member[s]) throw std::invalid_argument("repeated set mask " + std::to_string(s));
    f.member[s] = 1;
  }
  return f;
}

std::vector<SetMask> SetFamily::sets() const {
  std::vector<SetMask> out;
  for (SetMask s = 0; s < member.size(); ++s)
    if (member[s]) out.push_back(s);
  return out;
}

std::size_t SetFamily::size() const {
  return static_cast<std::size_t>(std::count(member.begin(), member.end(), std::uint8_t{1}));
}

ChainProfile chain_profile(const SetFamily& f) {
  const SetMask full = static_cast<SetMask>(f.member.size() - 1);
  const std::size_t m = f.member.size();
  ChainProfile p;
  p.below.assign(m, 0);
  p.above.assign(m, 0);
  // upto[s]: longest chain among members contained in s (s included).
  std::vector<int> upto(m, 0), from(m, 0);
  for (SetMask s = 0; s < m; ++s) {
    int b = 0;
    for (int i = 0; i < f.n; ++i)
      if (s >> i & 1U) b = std::max(b, upto[s ^ (1U << i)]);
    p.below[s] = b;
    upto[s] = b + f.member[s];
  }
  for (SetMask s = full + 1; s-- > 0;) {
    int a = 0;
    for (int i = 0; i < f.n; ++i)
      if (!(s >> i & 1U)) a = std::max(a, from[s | (1U << i)]);
    p.above[s] = a;
    from[s] = a + f.member[s];
  }
  p.longest = upto[full];
  return p;
}

int longest_chain(const SetFamily& f, std::optional<SetMask> extra) {
  auto p = chain_profile(f);
  if (!extra || f.contains(*extra)) return p.longest;
  if (*extra >= f.member.size()) throw std::invalid_argument("extra set outside 2^n");
  return std::max(p.longest, p.through(*extra));
}

bool is_k_sperner(const SetFamily& f, int k) { return chain_profile(f).longest <= k; }

bool is_saturated_k_sperner(const SetFamily& f, int k) {
  auto p = chain_profile(f);
  if (p.longest > k) return false;
  for (SetMask s = 0; s < f.member.size(); ++s)
    if (!f.member[s] && p.through(s) <= k) return false;
  return true;
}

std::size_t count_addable(const SetFamily& f, int k) {
  auto p = chain_profile(f);
  std::size_t c = 0;
  for (SetMask s = 0; s < f.member.size(); ++s)
    if (!f.member[s] && std::max(p.longest, p.through(s)) <= k) ++c;
  return c;
}

Score score_sperner(const SetFamily& f, int k) {
  const auto size = static_cast<Score>(f.size());
  if (is_saturated_k_sperner(f, k)) return -size;
  return -size - static_cast<Score>(count_addable(f, k));
}

SetFamily local_search_sperner(SetFamily f, int k, Rng& rng) {
  std::vector<SetMask> pick;
  for (;;) {
    auto p = chain_profile(f);
    if (p.longest <= k) break;
    pick.clear();
    for (SetMask s = 0; s < f.member.size(); ++s)
      if (f.member[s] && p.through(s) == p.longest) pick.push_back(s);
    f.member[pick[uniform_index(rng, pick.size())]] = 0;
  }

  // Addability only shrinks as sets are added: one random pass ends saturated.
  std::vector<SetMask> candidates;
  for (SetMask s = 0; s < f.member.size(); ++s)
    if (!f.member[s]) candidates.push_back(s);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  auto p = chain_profile(f);
  for (SetMask s : candidates)
    if (p.through(s) <= k) {
      f.member[s] = 1;
      p = chain_profile(f);
    }
  return f;
}

}  // namespace pb::problems
