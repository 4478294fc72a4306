#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "patternboost/problems/pattern312.hpp"

namespace pb::problems {

using BigInt = boost::multiprecision::cpp_int;

/// Largest side accepted by `permanent` (2^n Gray-code steps).
inline constexpr int kMaxPermanentSide = 30;

/// Exact permanent by Ryser's inclusion-exclusion formula with Gray-code column
/// updates. Throws std::invalid_argument above kMaxPermanentSide.
BigInt permanent(const BinaryMatrix& m);

/// The permanent as a pool score; throws std::overflow_error above 63 bits.
Score permanent_score(const BinaryMatrix& m);

}  // namespace pb::problems
