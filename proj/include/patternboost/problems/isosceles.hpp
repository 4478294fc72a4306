#pragma once

#include <cstdint>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

struct Point2 {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

/// Points of the n x n grid (0-based), stored as an occupancy mask indexed x * n + y.
struct PointSet2D {
  int n = 0;
  std::vector<std::uint8_t> occupied;

  static PointSet2D empty(int n);
  static PointSet2D from_payload(int n, const Payload& payload);
  /// Throws std::invalid_argument on out-of-range or repeated points.
  static PointSet2D from_points(int n, const std::vector<Point2>& pts);

  bool contains(Point2 p) const { return occupied[static_cast<std::size_t>(p.x) * n + p.y] != 0; }
  void insert(Point2 p) { occupied[static_cast<std::size_t>(p.x) * n + p.y] = 1; }
  void erase(Point2 p) { occupied[static_cast<std::size_t>(p.x) * n + p.y] = 0; }
  std::vector<Point2> points() const;
  std::size_t size() const;

  friend bool operator==(const PointSet2D&, const PointSet2D&) = default;
};

constexpr std::int64_t dist2(Point2 a, Point2 b) {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Ordered triples (a, b, c) of distinct points with d(b, a) = d(b, c), counted once per
/// unordered pair {a, c} and apex b. Collinear triples count.
std::size_t count_isosceles(const PointSet2D& p);

bool is_isosceles_free(const PointSet2D& p);
/// Free, and every absent grid point would create an isosceles triple.
bool is_maximal_isosceles_free(const PointSet2D& p);

/// |S| for isosceles-free sets, |S| - 2 * (#isosceles triples) otherwise.
Score score_isosceles(const PointSet2D& p);

/// Removes a random point among those in the most isosceles triples until free, then
/// adds random admissible points until maximal.
PointSet2D local_search_isosceles(PointSet2D p, Rng& rng);

}  // namespace pb::problems
