#include "patternboost/oracles/counts.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "patternboost/kernels/kernels.hpp"

namespace pb::oracles {

using problems::GraphBits;
using problems::Point2;
using problems::Point3;
using problems::SetMask;

std::uint64_t count_triangles_naive(const GraphBits& g) {
  std::uint64_t t = 0;
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      for (int c = b + 1; c < g.n; ++c)
        if (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) ++t;
  return t;
}

std::uint64_t count_c4_naive(const GraphBits& g) {
  auto cyc = [&](int p, int q, int r, int s) {
    return g.has_edge(p, q) && g.has_edge(q, r) && g.has_edge(r, s) && g.has_edge(s, p);
  };
  std::uint64_t t = 0;
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      for (int c = b + 1; c < g.n; ++c)
        for (int d = c + 1; d < g.n; ++d) t += cyc(a, b, c, d) + cyc(a, b, d, c) + cyc(a, c, b, d);
  return t;
}

bool contains_312_naive(const problems::BinaryMatrix& m) {
  const int n = m.n;
  for (int r1 = 0; r1 < n; ++r1)
    for (int r2 = r1 + 1; r2 < n; ++r2)
      for (int r3 = r2 + 1; r3 < n; ++r3)
        for (int c1 = 0; c1 < n; ++c1)
          for (int c2 = c1 + 1; c2 < n; ++c2)
            for (int c3 = c2 + 1; c3 < n; ++c3)
              if (m.at(r1, c3) && m.at(r2, c1) && m.at(r3, c2)) return true;
  return false;
}

namespace {

std::uint64_t perm_rows(const problems::BinaryMatrix& m, int row, unsigned used) {
  if (row == m.n) return 1;
  std::uint64_t s = 0;
  for (int c = 0; c < m.n; ++c)
    if (!(used >> c & 1U) && m.at(row, c)) s += perm_rows(m, row + 1, used | (1U << c));
  return s;
}

}  // namespace

std::uint64_t permanent_naive(const problems::BinaryMatrix& m) {
  if (m.n > 10) throw std::domain_error("permanent_naive handles n <= 10");
  return perm_rows(m, 0, 0);
}

std::uint64_t count_isosceles_naive(const std::vector<Point2>& pts) {
  auto d2 = [](Point2 a, Point2 b) {
    const long long dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
  };
  std::uint64_t t = 0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const auto ab = d2(pts[i], pts[j]), bc = d2(pts[j], pts[k]), ac = d2(pts[i], pts[k]);
        if (ab == bc || bc == ac || ab == ac) ++t;
      }
  return t;
}

namespace {

std::array<long long, 5> lift_row(Point3 p) {
  const long long x = p.x, y = p.y, z = p.z;
  return {x, y, z, x * x + y * y + z * z, 1};
}

// Laplace expansion along the first row of the submatrix given by rows[r..] and the
// column mask.
__int128 det_rec(const std::array<std::array<long long, 5>, 5>& a, int r, unsigned cols) {
  if (r == 5) return 1;
  __int128 s = 0;
  int sign = 1;
  for (int c = 0; c < 5; ++c) {
    if (!(cols >> c & 1U)) continue;
    if (a[r][c] != 0) s += sign * static_cast<__int128>(a[r][c]) * det_rec(a, r + 1, cols & ~(1U << c));
    sign = -sign;
  }
  return s;
}

// 4x4 minors of the lifted rows of four points: det(p..., e) = sum_j co[j] * lift(e)_j.
std::array<long long, 5> cofactors_naive(Point3 a, Point3 b, Point3 c, Point3 d) {
  std::array<std::array<long long, 5>, 5> m{lift_row(a), lift_row(b), lift_row(c), lift_row(d), {}};
  std::array<long long, 5> co{};
  for (int j = 0; j < 5; ++j) {
    std::array<std::array<long long, 5>, 5> t = m;
    for (int k = 0; k < 5; ++k) t[4][k] = (k == j);
    co[j] = static_cast<long long>(det_rec(t, 0, 0x1f));
  }
  return co;
}

std::vector<Point3> grid_points(int n) {
  std::vector<Point3> pts;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) pts.push_back({x, y, z});
  return pts;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

__int128 cosphere_det_naive(const std::array<Point3, 5>& p) {
  std::array<std::array<long long, 5>, 5> a{};
  for (int i = 0; i < 5; ++i) a[i] = lift_row(p[i]);
  return det_rec(a, 0, 0x1f);
}

bool is_no5_sphere_naive(const std::vector<Point3>& pts) {
  const std::size_t m = pts.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d)
          for (std::size_t e = d + 1; e < m; ++e)
            if (cosphere_det_naive({pts[a], pts[b], pts[c], pts[d], pts[e]}) == 0) return false;
  return true;
}

int cube_diameter_naive(const problems::CubeSubgraph& s) {
  const int v = 1 << s.d;
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> dist(static_cast<std::size_t>(v) * v, kInf);
  auto at = [&](int i, int j) -> int& { return dist[static_cast<std::size_t>(i) * v + j]; };
  for (int i = 0; i < v; ++i) {
    at(i, i) = 0;
    for (int c = 0; c < s.d; ++c) {
      const int j = i ^ (1 << c);
      if (s.has_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j))) at(i, j) = 1;
    }
  }
  for (int k = 0; k < v; ++k)
    for (int i = 0; i < v; ++i)
      for (int j = 0; j < v; ++j) at(i, j) = std::min(at(i, j), at(i, k) + at(k, j));
  int diam = 0;
  for (int x : dist) {
    if (x >= kInf) return -1;
    diam = std::max(diam, x);
  }
  return diam;
}

int longest_chain_naive(const std::vector<SetMask>& family) {
  std::vector<SetMask> f = family;
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  std::stable_sort(f.begin(), f.end(), [](SetMask a, SetMask b) { return std::popcount(a) < std::popcount(b); });
  std::vector<int> best(f.size(), 1);
  int longest = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (f[j] != f[i] && (f[j] & f[i]) == f[j]) best[i] = std::max(best[i], best[j] + 1);
    longest = std::max(longest, best[i]);
  }
  return longest;
}

bool is_cross_sperner_naive(const std::vector<std::vector<SetMask>>& families) {
  for (std::size_t i = 0; i < families.size(); ++i)
    for (std::size_t j = 0; j < families.size(); ++j) {
      if (i == j) continue;
      for (SetMask a : families[i])
        for (SetMask b : families[j])
          if ((a & b) == a) return false;
    }
  return true;
}

std::vector<int> coverage_naive(const problems::BoxCover& c) {
  std::size_t points = 1;
  for (int i = 0; i < c.d; ++i) points *= 3;
  std::vector<int> cov(points, 0);
  for (std::size_t p = 0; p < points; ++p) {
    for (const auto& box : c.boxes) {
      std::size_t rest = p;
      bool in = true;
      for (int i = 0; i < c.d; ++i) {
        const unsigned coord = static_cast<unsigned>(rest % 3);
        rest /= 3;
        if (!(box[static_cast<std::size_t>(i)] >> coord & 1U)) in = false;
      }
      cov[p] += in;
    }
  }
  return cov;
}

StructureCounts count_structures(const GraphBits& g) { return {count_triangles_naive(g), count_c4_naive(g)}; }

CosphericalCount count_cospherical(int n, int workers) {
  if (n < 1 || n > 8) throw std::domain_error("count_cospherical handles 1 <= n <= 8");
  const auto pts = grid_points(n);
  const std::size_t m = pts.size();
  std::vector<std::array<std::int32_t, 5>> lifts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto l = lift_row(pts[i]);
    for (int j = 0; j < 5; ++j) lifts[i][static_cast<std::size_t>(j)] = static_cast<std::int32_t>(l[j]);
  }
  const auto& k = kernels::active();

  // partial[a]: degenerate 5-subsets whose smallest index is a.
  std::vector<std::uint64_t> partial(m, 0);
  auto work = [&](std::size_t a) {
    std::array<std::vector<std::int32_t>, 5> c;
    std::uint64_t count = 0;
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t cc = b + 1; cc < m; ++cc) {
        for (auto& v : c) v.clear();
        for (std::size_t d = cc + 1; d < m; ++d) {
          const auto co = cofactors_naive(pts[a], pts[b], pts[cc], pts[d]);
          for (int j = 0; j < 5; ++j) {
            if (co[j] > std::numeric_limits<std::int32_t>::max() || co[j] < std::numeric_limits<std::int32_t>::min())
              throw std::overflow_error("cofactor exceeds 32 bits");
            c[static_cast<std::size_t>(j)].push_back(static_cast<std::int32_t>(co[j]));
          }
        }
        // Forms are ordered by d; the ones with d < e form a prefix.
        for (std::size_t e = cc + 2; e < m; ++e) {
          kernels::LinearForms5 f{{c[0].data(), c[1].data(), c[2].data(), c[3].data(), c[4].data()}, e - cc - 1};
          count += k.count_zero_form5(f, lifts[e].data());
        }
      }
    partial[a] = count;
  };

  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), m);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t a; (a = next.fetch_add(1)) < m;) {
      try {
        work(a);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  CosphericalCount r;
  for (auto x : partial) r.degenerate += x;
  r.total = binom(m, 5);
  return r;
}

CosphericalCount count_cospherical_naive(int n) {
  if (n < 1 || n > 8) throw std::domain_error("count_cospherical_naive handles 1 <= n <= 8");
  const auto pts = grid_points(n);
  const std::size_t m = pts.size();
  CosphericalCount r;
  r.total = binom(m, 5);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d)
          for (std::size_t e = d + 1; e < m; ++e)
            if (cosphere_det_naive({pts[a], pts[b], pts[c], pts[d], pts[e]}) == 0) ++r.degenerate;
  return r;
}

}  // namespace pb::oracles
