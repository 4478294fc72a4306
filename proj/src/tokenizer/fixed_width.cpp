#include "patternboost/tokenizer/fixed_width.hpp"

#include <stdexcept>
#include <string>

#include "patternboost/problems/sphere.hpp"
#include "patternboost/tokenizer/flatten.hpp"

namespace pb::tokenizer {

namespace {

void check_width(int k) {
  if (k < 1 || k > kMaxFixedWidth)
    throw std::invalid_argument("fixed width must be in [1, " + std::to_string(kMaxFixedWidth) + "]");
}

}  // namespace

std::vector<int> fixed_width_encode(const std::vector<int>& bits, int k) {
  check_width(k);
  const std::size_t ku = static_cast<std::size_t>(k);
  const std::size_t groups = (bits.size() + ku - 1) / ku;
  const std::size_t pad = groups * ku - bits.size();
  std::vector<int> out(groups, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("fixed_width_encode: symbol is not a bit");
    const std::size_t pos = i + pad;
    out[pos / ku] = (out[pos / ku] << 1) | bits[i];
  }
  return out;
}

std::vector<int> fixed_width_decode(const std::vector<int>& tokens, int k, std::size_t length) {
  check_width(k);
  const std::size_t ku = static_cast<std::size_t>(k);
  const std::size_t groups = (length + ku - 1) / ku;
  if (tokens.size() != groups)
    throw DecodeError("expected " + std::to_string(groups) + " tokens, got " + std::to_string(tokens.size()));
  const std::size_t pad = groups * ku - length;
  std::vector<int> bits;
  bits.reserve(groups * ku);
  for (int t : tokens) {
    if (t < 0 || t >= (1 << k)) throw DecodeError("token " + std::to_string(t) + " exceeds " + std::to_string(k) + " bits");
    for (int b = k - 1; b >= 0; --b) bits.push_back((t >> b) & 1);
  }
  for (std::size_t i = 0; i < pad; ++i)
    if (bits[i]) throw DecodeError("nonzero padding bit");
  bits.erase(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(pad));
  return bits;
}

int point_encode(std::array<int, 3> p, int n) { return problems::point_index({p[0], p[1], p[2]}, n); }

std::array<int, 3> point_decode(int index, int n) {
  auto p = problems::point_at(index, n);
  return {p.x, p.y, p.z};
}

}  // namespace pb::tokenizer
