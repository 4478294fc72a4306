#pragma once

#include <cstdint>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

inline constexpr int kMaxBoxDimension = 8;

/// d factors, each a subset of {0, 1, 2} as a 3-bit mask.
using Box = std::vector<std::uint8_t>;

/// Every factor nonempty and different from {0, 1, 2}.
bool is_proper(const Box& b);

struct BoxCoverWeights {
  int over = 3;
  int under = 1;
};

/// A multiset of boxes in {0,1,2}^d. Payloads hold max_boxes slots of d digits each;
/// an all-zero slot is empty and the used slots come first in sorted order.
struct BoxCover {
  int d = 0;
  std::vector<Box> boxes;

  /// Throws ShapeError on a slot mixing empty and nonempty factors.
  static BoxCover from_payload(int d, std::size_t max_boxes, const Payload& payload);
  /// Throws ShapeError when there are more boxes than slots.
  Payload to_payload(std::size_t max_boxes) const;

  friend bool operator==(const BoxCover&, const BoxCover&) = default;
};

/// Points of {0,1,2}^d in base-3 order (first coordinate least significant).
std::size_t box_points(int d);

/// How many boxes cover each point.
std::vector<int> coverage(const BoxCover& c);

/// Every box proper and every point covered exactly twice.
bool verify_double_cover(const BoxCover& c);

/// -(boxes) - over * sum(max(0, cover - 2)) - under * sum(max(0, 2 - cover)); kInvalidScore
/// when some box is not proper.
Score score_box_cover(const BoxCover& c, BoxCoverWeights w = {});

/// Drops improper boxes, deletes random boxes among those over-covering the most points
/// until nothing is covered more than twice, then fills holes with proper boxes grown
/// greedily over under-covered points.
BoxCover local_search_box_cover(BoxCover c, Rng& rng);

}  // namespace pb::problems
