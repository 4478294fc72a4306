#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

/// Largest grid side whose lifted cofactors are guaranteed to fit the 32-bit form kernel.
inline constexpr int kMaxSphereGrid = 24;

struct Point3 {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

/// a0 * n^2 + a1 * n + a2. Throws std::invalid_argument for coordinates outside [0, n).
int point_index(Point3 p, int n);
Point3 point_at(int index, int n);

/// Occupancy of the n x n x n grid, indexed by point_index.
struct PointSet3D {
  int n = 0;
  std::vector<std::uint8_t> occupied;

  static PointSet3D empty(int n);
  static PointSet3D from_payload(int n, const Payload& payload);
  /// Throws std::invalid_argument on out-of-range or repeated points.
  static PointSet3D from_points(int n, const std::vector<Point3>& pts);

  bool contains(Point3 p) const { return occupied[static_cast<std::size_t>(point_index(p, n))] != 0; }
  std::vector<Point3> points() const;
  std::size_t size() const;

  friend bool operator==(const PointSet3D&, const PointSet3D&) = default;
};

/// Determinant of the 5 x 5 matrix with rows (x, y, z, x^2 + y^2 + z^2, 1). Zero iff the
/// five points lie on a common sphere or plane. Throws std::overflow_error past 64 bits.
std::int64_t cosphere_det(Point3 a, Point3 b, Point3 c, Point3 d, Point3 e);

/// True iff no five of the points are cospherical or coplanar. Works for any integer
/// coordinates in [0, kMaxSphereGrid), independent of a grid side.
bool is_no5_sphere(const std::vector<Point3>& pts);

/// Set under construction: admits a point only if it completes no cospherical 5-tuple.
/// Each 4-subset of members is kept as the linear form q -> det(a, b, c, d, q) on the
/// lifted point, so a candidate costs one batched form evaluation.
class SphereBuilder {
 public:
  explicit SphereBuilder(int coordinate_bound);

  bool admissible(Point3 q) const;
  /// Adds q if admissible and not yet present. Returns whether it was added.
  bool try_add(Point3 q);
  const std::vector<Point3>& points() const { return pts_; }
  std::size_t form_count() const { return c_[0].size(); }

 private:
  int bound_;
  std::vector<Point3> pts_;
  std::array<std::vector<std::int32_t>, 5> c_;
};

/// Tries the seed points in order, then every remaining grid point in random order.
/// Admissibility only shrinks as points are added, so the result is maximal.
PointSet3D local_search_sphere(const std::vector<Point3>& seed, int n, Rng& rng);

bool is_maximal_no5_sphere(const PointSet3D& p);

/// |S| for valid sets, kInvalidScore otherwise.
Score score_sphere(const PointSet3D& p);

/// Signed permutation of the axes: coordinate i of the image is axis perm[i] of the
/// source, reflected x -> n - 1 - x when bit i of `flips` is set.
struct CubeSymmetry {
  std::array<int, 3> perm{0, 1, 2};
  unsigned flips = 0;
  friend bool operator==(const CubeSymmetry&, const CubeSymmetry&) = default;
};

/// The 48 symmetries, identity first.
const std::array<CubeSymmetry, 48>& cube_symmetry_group();
CubeSymmetry inverse(const CubeSymmetry& s);
Point3 apply(const CubeSymmetry& s, Point3 p, int n);
PointSet3D apply(const CubeSymmetry& s, const PointSet3D& p);

/// Images of p under all 48 symmetries, in group order (duplicates kept).
std::vector<PointSet3D> cube_symmetries(const PointSet3D& p);

}  // namespace pb::problems
