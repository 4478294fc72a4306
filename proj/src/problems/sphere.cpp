#include "patternboost/problems/sphere.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "patternboost/kernels/kernels.hpp"

namespace pb::problems {

namespace {

using Lift = std::array<std::int64_t, 5>;

Lift lift(Point3 p) {
  const std::int64_t x = p.x, y = p.y, z = p.z;
  return {x, y, z, x * x + y * y + z * z, 1};
}

void check_grid(int n) {
  if (n < 1 || n > kMaxSphereGrid)
    throw std::invalid_argument("sphere grid side must be in [1, " + std::to_string(kMaxSphereGrid) + "]");
}

std::string show(Point3 p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.z) + ")";
}

std::int64_t det3(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t e,
                  std::int64_t f, std::int64_t g, std::int64_t h, std::int64_t i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// 4 x 4 determinant of rows r[0..3] restricted to the columns in `cols`.
std::int64_t det4(const Lift* r, const int cols[4]) {
  std::int64_t m[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = r[i][cols[j]];
  std::int64_t s = 0;
  for (int j = 0; j < 4; ++j) {
    std::int64_t sub[9];
    int k = 0;
    for (int i = 1; i < 4; ++i)
      for (int jj = 0; jj < 4; ++jj)
        if (jj != j) sub[k++] = m[i][jj];
    const std::int64_t minor = det3(sub[0], sub[1], sub[2], sub[3], sub[4], sub[5], sub[6], sub[7], sub[8]);
    s += (j % 2 == 0 ? 1 : -1) * m[0][j] * minor;
  }
  return s;
}

// Coefficients of q -> det(a, b, c, d, q), by cofactor expansion along the last row.
std::array<std::int64_t, 5> cofactors(Point3 a, Point3 b, Point3 c, Point3 d) {
  const Lift rows[4] = {lift(a), lift(b), lift(c), lift(d)};
  std::array<std::int64_t, 5> out{};
  for (int j = 0; j < 5; ++j) {
    int cols[4], k = 0;
    for (int jj = 0; jj < 5; ++jj)
      if (jj != j) cols[k++] = jj;
    out[j] = (j % 2 == 0 ? 1 : -1) * det4(rows, cols);
  }
  return out;
}

void check_bound(Point3 p, int bound) {
  if (p.x < 0 || p.y < 0 || p.z < 0 || p.x >= bound || p.y >= bound || p.z >= bound)
    throw std::invalid_argument("point " + show(p) + " outside [0, " + std::to_string(bound) + ")^3");
}

}  // namespace

int point_index(Point3 p, int n) {
  check_bound(p, n);
  return (p.x * n + p.y) * n + p.z;
}

Point3 point_at(int index, int n) {
  if (index < 0 || index >= n * n * n)
    throw std::invalid_argument("point index " + std::to_string(index) + " outside the grid");
  return {index / (n * n), (index / n) % n, index % n};
}

PointSet3D PointSet3D::empty(int n) {
  check_grid(n);
  return PointSet3D{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n * n, 0)};
}

PointSet3D PointSet3D::from_payload(int n, const Payload& payload) {
  check_grid(n);
  if (payload.size() != static_cast<std::size_t>(n) * n * n)
    throw ShapeError("sphere payload has " + std::to_string(payload.size()) + " cells, expected " +
                     std::to_string(n * n * n));
  for (auto b : payload)
    if (b > 1) throw ShapeError("sphere payload symbol must be 0 or 1");
  return PointSet3D{n, payload};
}

PointSet3D PointSet3D::from_points(int n, const std::vector<Point3>& pts) {
  auto s = empty(n);
  for (auto p : pts) {
    auto& cell = s.occupied[static_cast<std::size_t>(point_index(p, n))];
    if (cell) throw std::invalid_argument("repeated point " + show(p));
    cell = 1;
  }
  return s;
}

std::vector<Point3> PointSet3D::points() const {
  std::vector<Point3> out;
  for (std::size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i]) out.push_back(point_at(static_cast<int>(i), n));
  return out;
}

std::size_t PointSet3D::size() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

std::int64_t cosphere_det(Point3 a, Point3 b, Point3 c, Point3 d, Point3 e) {
  const auto co = cofactors(a, b, c, d);
  const auto le = lift(e);
  __int128 s = 0;
  for (int j = 0; j < 5; ++j) s += static_cast<__int128>(co[j]) * le[j];
  if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("cospherical determinant exceeds 64 bits");
  return static_cast<std::int64_t>(s);
}

SphereBuilder::SphereBuilder(int coordinate_bound) : bound_(coordinate_bound) {
  if (coordinate_bound < 1 || coordinate_bound > kMaxSphereGrid)
    throw std::invalid_argument("coordinate bound must be in [1, " + std::to_string(kMaxSphereGrid) + "]");
}

bool SphereBuilder::admissible(Point3 q) const {
  if (pts_.size() < 4) return true;
  const auto l = lift(q);
  const std::int32_t l32[5] = {static_cast<std::int32_t>(l[0]), static_cast<std::int32_t>(l[1]),
                               static_cast<std::int32_t>(l[2]), static_cast<std::int32_t>(l[3]), 1};
  kernels::LinearForms5 forms{{c_[0].data(), c_[1].data(), c_[2].data(), c_[3].data(), c_[4].data()},
                              c_[0].size()};
  return !kernels::active().any_zero_form5(forms, l32);
}

bool SphereBuilder::try_add(Point3 q) {
  check_bound(q, bound_);
  if (std::find(pts_.begin(), pts_.end(), q) != pts_.end()) return false;
  if (!admissible(q)) return false;
  const std::size_t m = pts_.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const auto co = cofactors(pts_[i], pts_[j], pts_[k], q);
        for (int t = 0; t < 5; ++t) {
          if (co[t] > std::numeric_limits<std::int32_t>::max() || co[t] < std::numeric_limits<std::int32_t>::min())
            throw std::overflow_error("cofactor exceeds 32 bits");
          c_[t].push_back(static_cast<std::int32_t>(co[t]));
        }
      }
  pts_.push_back(q);
  return true;
}

bool is_no5_sphere(const std::vector<Point3>& pts) {
  SphereBuilder b(kMaxSphereGrid);
  for (auto p : pts)
    if (!b.try_add(p)) return false;  // repeated points are rejected too
  return true;
}

PointSet3D local_search_sphere(const std::vector<Point3>& seed, int n, Rng& rng) {
  check_grid(n);
  SphereBuilder b(n);
  for (auto p : seed) b.try_add(p);

  auto out = PointSet3D::from_points(n, b.points());
  std::vector<int> rest;
  for (int i = 0; i < n * n * n; ++i)
    if (!out.occupied[static_cast<std::size_t>(i)]) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (int i : rest)
    if (b.try_add(point_at(i, n))) out.occupied[static_cast<std::size_t>(i)] = 1;
  return out;
}

bool is_maximal_no5_sphere(const PointSet3D& p) {
  SphereBuilder b(p.n);
  for (auto q : p.points())
    if (!b.try_add(q)) return false;
  for (int i = 0; i < p.n * p.n * p.n; ++i)
    if (!p.occupied[static_cast<std::size_t>(i)] && b.admissible(point_at(i, p.n))) return false;
  return true;
}

Score score_sphere(const PointSet3D& p) {
  auto pts = p.points();
  return is_no5_sphere(pts) ? static_cast<Score>(pts.size()) : kInvalidScore;
}

const std::array<CubeSymmetry, 48>& cube_symmetry_group() {
  static const std::array<CubeSymmetry, 48> group = [] {
    std::array<CubeSymmetry, 48> g{};
    std::array<int, 3> perm{0, 1, 2};
    std::size_t k = 0;
    do {
      for (unsigned flips = 0; flips < 8; ++flips) g[k++] = CubeSymmetry{perm, flips};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g;
  }();
  return group;
}

CubeSymmetry inverse(const CubeSymmetry& s) {
  // image[i] = reflect_i(src[perm[i]]), so src[perm[i]] = reflect_i(image[i]).
  CubeSymmetry inv;
  for (int i = 0; i < 3; ++i) inv.perm[s.perm[i]] = i;
  inv.flips = 0;
  for (int i = 0; i < 3; ++i)
    if (s.flips & (1U << i)) inv.flips |= 1U << s.perm[i];
  return inv;
}

Point3 apply(const CubeSymmetry& s, Point3 p, int n) {
  const int src[3] = {p.x, p.y, p.z};
  int out[3];
  for (int i = 0; i < 3; ++i) {
    int v = src[s.perm[i]];
    out[i] = (s.flips & (1U << i)) ? n - 1 - v : v;
  }
  return {out[0], out[1], out[2]};
}

PointSet3D apply(const CubeSymmetry& s, const PointSet3D& p) {
  auto out = PointSet3D::empty(p.n);
  for (auto q : p.points()) out.occupied[static_cast<std::size_t>(point_index(apply(s, q, p.n), p.n))] = 1;
  return out;
}

std::vector<PointSet3D> cube_symmetries(const PointSet3D& p) {
  std::vector<PointSet3D> out;
  out.reserve(48);
  for (const auto& s : cube_symmetry_group()) out.push_back(apply(s, p));
  return out;
}

}  // namespace pb::problems
