#include "patternboost/problems/permanent.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

// Every term of Ryser's sum is evaluated modulo 2^W. For binary matrices the exact
// result lies in [0, n!] and n! < 2^108 for n <= 30, so the wrapped sum equals the
// permanent as long as 2^W exceeds that bound.
template <class Word>
Word ryser(const BinaryMatrix& m) {
  const int n = m.n;
  std::vector<Word> row_sum(static_cast<std::size_t>(n), 0);
  Word total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    if (gray & bit) {
      for (int r = 0; r < n; ++r) row_sum[r] += m.at(r, col);
    } else {
      for (int r = 0; r < n; ++r) row_sum[r] -= m.at(r, col);
    }
    Word prod = 1;
    for (int r = 0; r < n && prod != 0; ++r) prod *= row_sum[r];
    // sign (-1)^(n - |S|)
    if ((n - std::popcount(gray)) & 1)
      total -= prod;
    else
      total += prod;
  }
  return total;
}

BigInt to_big(unsigned __int128 v) {
  BigInt out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

}  // namespace

BigInt permanent(const BinaryMatrix& m) {
  const int n = m.n;
  if (n > kMaxPermanentSide)
    throw std::invalid_argument("permanent limited to n <= " + std::to_string(kMaxPermanentSide) + ", got n=" +
                                std::to_string(n));
  if (n == 0) return 1;

  // Upper bound min(n!, prod of row sums) picks the narrowest exact word.
  long double bound_fact = 1, bound_rows = 1;
  for (int r = 0; r < n; ++r) {
    int s = 0;
    for (int c = 0; c < n; ++c) s += m.at(r, c);
    if (s == 0) return 0;
    bound_rows *= s;
    bound_fact *= (r + 1);
  }
  const long double bound = std::min(bound_fact, bound_rows);
  if (bound < 9.0e18L) return BigInt(ryser<std::uint64_t>(m));
  return to_big(ryser<unsigned __int128>(m));
}

Score permanent_score(const BinaryMatrix& m) {
  BigInt p = permanent(m);
  if (p > BigInt(std::numeric_limits<Score>::max()))
    throw std::overflow_error("permanent exceeds a 63-bit score");
  return static_cast<Score>(p);
}

}  // namespace pb::problems
