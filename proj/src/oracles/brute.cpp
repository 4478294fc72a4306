#include "patternboost/oracles/brute.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "patternboost/oracles/counts.hpp"
#include "patternboost/problems/cross_sperner.hpp"

namespace pb::oracles {

using namespace problems;

namespace {

// Edges by backtracking over slots in order; an edge is only added when the naive
// incremental check allows it, so every leaf is a valid graph.
Score best_graph(int n, bool c4) {
  GraphBits g = GraphBits::empty(n);
  const std::size_t slots = edge_slots(n);
  Score best = 0;
  auto creates = [&](int u, int v) {
    for (int w = 0; w < n; ++w) {
      if (w == u || w == v || !g.has_edge(u, w)) continue;
      if (!c4) {
        if (g.has_edge(w, v)) return true;
        continue;
      }
      for (int x = 0; x < n; ++x)
        if (x != u && x != v && x != w && g.has_edge(w, x) && g.has_edge(x, v)) return true;
    }
    return false;
  };
  std::function<void(std::size_t, Score)> go = [&](std::size_t slot, Score edges) {
    if (edges + static_cast<Score>(slots - slot) <= best) return;
    if (slot == slots) {
      const bool ok = c4 ? count_c4_naive(g) == 0 : count_triangles_naive(g) == 0;
      if (!ok) throw std::logic_error("graph brute force produced an invalid graph");
      best = edges;
      return;
    }
    const auto [u, v] = edge_endpoints(slot, n);
    if (!creates(u, v)) {
      g.set_edge(u, v, true);
      go(slot + 1, edges + 1);
      g.set_edge(u, v, false);
    }
    go(slot + 1, edges);
  };
  go(0, 0);
  return best;
}

Score best_permanent312(int n) {
  const int cells = n * n;
  Score best = 0;
  for (std::uint32_t mask = 0; mask < (1U << cells); ++mask) {
    BinaryMatrix m = BinaryMatrix::zeros(n);
    for (int i = 0; i < cells; ++i) m.a[static_cast<std::size_t>(i)] = mask >> i & 1U;
    if (contains_312_naive(m)) continue;
    best = std::max<Score>(best, static_cast<Score>(permanent_naive(m)));
  }
  return best;
}

Score best_cube(int d) {
  const std::size_t slots = cube_edge_slots(d);
  std::size_t fewest = slots + 1;
  for (std::uint32_t mask = 0; mask < (1U << slots); ++mask) {
    const auto edges = static_cast<std::size_t>(std::popcount(mask));
    if (edges >= fewest) continue;
    CubeSubgraph s = CubeSubgraph::empty(d);
    for (std::size_t i = 0; i < slots; ++i) s.edge_bits[i] = mask >> i & 1U;
    if (cube_diameter_naive(s) == d) fewest = edges;
  }
  if (fewest > slots) throw std::logic_error("no spanning subgraph of the cube has the required diameter");
  return -static_cast<Score>(fewest);
}

Score best_isosceles(int n) {
  std::vector<Point2> grid;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) grid.push_back({x, y});
  std::vector<Point2> chosen;
  std::size_t best = 0;
  auto d2 = [](Point2 a, Point2 b) {
    const long long dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
  };
  auto fits = [&](Point2 p) {
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        const auto a = chosen[i], b = chosen[j];
        const auto pa = d2(p, a), pb = d2(p, b), ab = d2(a, b);
        if (pa == pb || pa == ab || pb == ab) return false;
      }
    return true;
  };
  std::function<void(std::size_t)> go = [&](std::size_t next) {
    if (chosen.size() + (grid.size() - next) <= best) return;
    if (next == grid.size()) {
      if (count_isosceles_naive(chosen) != 0) throw std::logic_error("isosceles brute force produced a bad set");
      best = chosen.size();
      return;
    }
    if (fits(grid[next])) {
      chosen.push_back(grid[next]);
      go(next + 1);
      chosen.pop_back();
    }
    go(next + 1);
  };
  go(0);
  return static_cast<Score>(best);
}

Score best_sphere(int n) {
  std::vector<Point3> grid;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) grid.push_back({x, y, z});
  std::vector<Point3> chosen;
  std::size_t best = 0;
  auto fits = [&](Point3 p) {
    const std::size_t m = chosen.size();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t c = b + 1; c < m; ++c)
          for (std::size_t d = c + 1; d < m; ++d)
            if (cosphere_det_naive({chosen[a], chosen[b], chosen[c], chosen[d], p}) == 0) return false;
    return true;
  };
  std::function<void(std::size_t)> go = [&](std::size_t next) {
    if (chosen.size() + (grid.size() - next) <= best) return;
    if (next == grid.size()) {
      best = chosen.size();
      return;
    }
    if (fits(grid[next])) {
      chosen.push_back(grid[next]);
      go(next + 1);
      chosen.pop_back();
    }
    go(next + 1);
  };
  go(0);
  return static_cast<Score>(best);
}

Score best_sperner(int n, int k) {
  const std::size_t sets = std::size_t{1} << n;
  std::size_t fewest = sets + 1;
  for (std::uint32_t fam = 0; fam < (1U << sets); ++fam) {
    const auto size = static_cast<std::size_t>(std::popcount(fam));
    if (size >= fewest) continue;
    std::vector<SetMask> f;
    for (SetMask s = 0; s < sets; ++s)
      if (fam >> s & 1U) f.push_back(s);
    if (longest_chain_naive(f) > k) continue;
    bool saturated = true;
    for (SetMask s = 0; s < sets && saturated; ++s) {
      if (fam >> s & 1U) continue;
      f.push_back(s);
      if (longest_chain_naive(f) <= k) saturated = false;
      f.pop_back();
    }
    if (saturated) fewest = size;
  }
  return -static_cast<Score>(fewest);
}

// Owners of families 1..k-1 are enumerated; family k then takes every free set that is
// comparable with no member of another family, which maximises its size.
Score best_cross_sperner(int n, int k) {
  const std::size_t sets = std::size_t{1} << n;
  std::vector<int> owner(sets, 0);
  Score best = 0;
  std::function<void(std::size_t)> go = [&](std::size_t s) {
    if (s == sets) {
      std::vector<std::vector<SetMask>> fam(static_cast<std::size_t>(k));
      for (SetMask t = 0; t < sets; ++t)
        if (owner[t]) fam[static_cast<std::size_t>(owner[t] - 1)].push_back(t);
      fam.pop_back();
      if (!is_cross_sperner_naive(fam)) return;
      std::vector<SetMask> last;
      for (SetMask t = 0; t < sets; ++t) {
        if (owner[t]) continue;
        bool free = true;
        for (SetMask u = 0; u < sets && free; ++u)
          if (owner[u] && ((u & t) == u || (u & t) == t)) free = false;
        if (free) last.push_back(t);
      }
      fam.push_back(last);
      Score prod = 1;
      for (const auto& f : fam) prod *= static_cast<Score>(f.size());
      best = std::max(best, prod);
      return;
    }
    for (int o = 0; o < k; ++o) {
      owner[s] = o;
      go(s + 1);
    }
    owner[s] = 0;
  };
  go(0);
  return best;
}

// Fewest proper boxes covering every point of {0,1,2}^d exactly twice: branch on the
// first point covered fewer than two times, over every box through it.
Score best_box_cover(int d) {
  std::size_t points = 1;
  for (int i = 0; i < d; ++i) points *= 3;
  std::vector<std::vector<std::size_t>> box_points;
  std::vector<std::vector<std::size_t>> through(points);
  std::size_t combos = 1;
  for (int i = 0; i < d; ++i) combos *= 6;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<unsigned> masks;
    std::size_t rest = code;
    for (int i = 0; i < d; ++i) {
      masks.push_back(static_cast<unsigned>(rest % 6) + 1);  // 1..6: nonempty proper subsets
      rest /= 6;
    }
    std::vector<std::size_t> pts;
    for (std::size_t p = 0; p < points; ++p) {
      std::size_t r = p;
      bool in = true;
      for (int i = 0; i < d; ++i) {
        if (!(masks[static_cast<std::size_t>(i)] >> (r % 3) & 1U)) in = false;
        r /= 3;
      }
      if (in) pts.push_back(p);
    }
    for (auto p : pts) through[p].push_back(box_points.size());
    box_points.push_back(std::move(pts));
  }
  std::size_t largest = 0;
  for (const auto& b : box_points) largest = std::max(largest, b.size());

  std::vector<int> cov(points, 0);
  std::size_t best = 4 * points + 1;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t used, std::size_t deficit) {
    if (deficit == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + (deficit + largest - 1) / largest >= best) return;
    std::size_t p = 0;
    while (cov[p] >= 2) ++p;
    for (std::size_t b : through[p]) {
      bool ok = true;
      for (auto q : box_points[b])
        if (cov[q] >= 2) ok = false;
      if (!ok) continue;
      for (auto q : box_points[b]) ++cov[q];
      go(used + 1, deficit - box_points[b].size());
      for (auto q : box_points[b]) --cov[q];
    }
  };
  go(0, 2 * points);
  return -static_cast<Score>(best);
}

}  // namespace

int brute_bound(ProblemId id, const ProblemParams& params) {
  switch (id) {
    case ProblemId::triangle:
    case ProblemId::c4:
      return 7;
    case ProblemId::permanent312:
      return 4;
    case ProblemId::cube:
      return 3;
    case ProblemId::isosceles:
      return 6;
    case ProblemId::sphere:
      return 3;
    case ProblemId::sperner:
      return 4;
    case ProblemId::cross_sperner: {
      // k^(2^n) owner assignments, at most 2^20.
      int n = 0;
      while (n < 5 && std::pow(static_cast<double>(params.k), std::ldexp(1.0, n + 1)) <= std::ldexp(1.0, 20)) ++n;
      return n;
    }
    case ProblemId::box_cover:
      return 2;
  }
  return 0;
}

Score brute_best(ProblemId id, const ProblemParams& params) {
  const int n = params.n;
  const int bound = brute_bound(id, params);
  if (n < 1 || n > bound)
    throw std::domain_error(std::string("brute force for ") + std::string(to_string(id)) + " refuses size " +
                            std::to_string(n) + " (accepts 1.." + std::to_string(bound) + ")");
  switch (id) {
    case ProblemId::triangle:
      return best_graph(n, false);
    case ProblemId::c4:
      return best_graph(n, true);
    case ProblemId::permanent312:
      return best_permanent312(n);
    case ProblemId::cube:
      return best_cube(n);
    case ProblemId::isosceles:
      return best_isosceles(n);
    case ProblemId::sphere:
      return best_sphere(n);
    case ProblemId::sperner:
      if (params.k < 1) throw std::domain_error("sperner brute force needs k >= 1");
      return best_sperner(n, params.k);
    case ProblemId::cross_sperner:
      if (params.k < 2 || params.k > kMaxCrossFamilies) throw std::domain_error("cross_sperner brute force needs 2 <= k <= 9");
      return best_cross_sperner(n, params.k);
    case ProblemId::box_cover:
      return best_box_cover(n);
  }
  throw std::domain_error("unknown problem");
}

}  // namespace pb::oracles
