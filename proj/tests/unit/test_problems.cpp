#include <doctest.h>

#include <algorithm>
#include <set>

#include "patternboost/core/rng.hpp"
#include "patternboost/oracles/counts.hpp"
#include "patternboost/oracles/fixtures.hpp"
#include "patternboost/problems/box_cover.hpp"
#include "patternboost/problems/c4.hpp"
#include "patternboost/problems/cross_sperner.hpp"
#include "patternboost/problems/hypercube.hpp"
#include "patternboost/problems/isosceles.hpp"
#include "patternboost/problems/pattern312.hpp"
#include "patternboost/problems/permanent.hpp"
#include "patternboost/problems/problem.hpp"
#include "patternboost/problems/sperner.hpp"
#include "patternboost/problems/sphere.hpp"
#include "patternboost/problems/triangle.hpp"

using namespace pb;
using namespace pb::problems;

namespace {

GraphBits complete_bipartite(int a, int b) {
  auto g = GraphBits::empty(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = a; j < a + b; ++j) g.set_edge(i, j, true);
  return g;
}

GraphBits random_graph(Rng& rng, int n) {
  const double density = std::uniform_real_distribution<double>(0, 1)(rng);
  auto g = GraphBits::empty(n);
  for (auto& b : g.bits) b = std::bernoulli_distribution(density)(rng) ? 1 : 0;
  return g;
}

oracles::Fixture fixture(const std::string& file, const std::string& name) {
  for (auto& f : oracles::load_fixture_file(std::filesystem::path(PATTERNBOOST_FIXTURE_DIR) / file))
    if (f.name == name) return f;
  throw std::runtime_error("no fixture " + name);
}

}  // namespace

TEST_CASE("triangle score and local search") {
  CHECK(score_triangle(GraphBits::empty(20)) == 0);
  CHECK(score_triangle(GraphBits::complete(3)) == 1);
  CHECK(count_triangles(GraphBits::complete(4)) == 4);
  const auto kb = complete_bipartite(10, 10);
  CHECK(score_triangle(kb) == 100);
  Rng rng = make_rng(1);
  CHECK(local_search_triangle(kb, rng) == kb);
  for (int t = 0; t < 20; ++t) CHECK(local_search_triangle(GraphBits::complete(3), rng).edge_count() == 2);

  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(rng, 3 + static_cast<int>(uniform_index(rng, 12)));
    CHECK(count_triangles(g) == oracles::count_triangles_naive(g));
    const auto h = local_search_triangle(g, rng);
    CHECK(is_triangle_free(h));
    CHECK(is_maximal_triangle_free(h));
  }
}

TEST_CASE("C4 score and local search") {
  auto star = GraphBits::empty(20);
  for (int v = 1; v < 20; ++v) star.set_edge(0, v, true);
  CHECK(is_c4_free(star));
  CHECK(score_c4(star) == 19);
  CHECK(count_c4(complete_bipartite(2, 2)) == 1);
  CHECK(count_c4(GraphBits::complete(4)) == 3);
  Rng rng = make_rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(rng, 4 + static_cast<int>(uniform_index(rng, 10)));
    CHECK(count_c4(g) == oracles::count_c4_naive(g));
    const auto h = local_search_c4(g, rng);
    CHECK(is_c4_free(h));
    CHECK(is_maximal_c4_free(h));
  }
}

TEST_CASE("312 pattern detection") {
  auto m = BinaryMatrix::zeros(3);
  m.at(0, 2) = m.at(1, 0) = m.at(2, 1) = 1;
  CHECK(contains_312(m));
  for (int n = 1; n <= 8; ++n) CHECK_FALSE(contains_312(BinaryMatrix::identity(n)));
  auto ones = BinaryMatrix::zeros(3);
  for (auto& x : ones.a) x = 1;
  CHECK(contains_312(ones));

  Rng rng = make_rng(3);
  const auto fixed = local_search_312(ones, rng);
  CHECK_FALSE(contains_312(fixed));
  CHECK(is_maximal_312_free(fixed));
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 6));
    auto r = BinaryMatrix::zeros(n);
    for (auto& x : r.a) x = static_cast<std::uint8_t>(uniform_index(rng, 2));
    CHECK(contains_312(r) == oracles::contains_312_naive(r));
    const auto s = local_search_312(r, rng);
    CHECK_FALSE(oracles::contains_312_naive(s));
    CHECK(is_maximal_312_free(s));
  }
}

TEST_CASE("permanent") {
  CHECK(permanent(BinaryMatrix::identity(5)) == 1);
  auto ones = BinaryMatrix::zeros(4);
  for (auto& x : ones.a) x = 1;
  CHECK(permanent(ones) == 24);
  for (int n = 1; n <= 7; ++n) {
    auto anti = BinaryMatrix::zeros(n);
    for (int i = 0; i < n; ++i) anti.at(i, n - 1 - i) = 1;
    CHECK(permanent(anti) == 1);
  }
  CHECK(permanent(BinaryMatrix::zeros(3)) == 0);
  CHECK_THROWS_AS(permanent(BinaryMatrix::zeros(kMaxPermanentSide + 1)), std::invalid_argument);
}

TEST_CASE("hypercube subgraphs") {
  const auto full = CubeSubgraph::full(6);
  CHECK(full.edge_count() == 192);
  CHECK(cube_diameter_ok(full));
  CHECK(score_cube(full) == -192);
  CHECK(classical_cube_edge_count(5) == 40);
  CHECK(score_cube(CubeSubgraph::empty(4)) == kInvalidScore);
  Rng rng = make_rng(4);
  for (int d = 2; d <= 5; ++d)
    for (int t = 0; t < 5; ++t) {
      const auto s = local_search_cube(CubeSubgraph::empty(d), rng);
      REQUIRE(cube_diameter_ok(s));
      CHECK(oracles::cube_diameter_naive(s) == d);
      // No single edge can be dropped.
      for (std::size_t i = 0; i < s.edge_bits.size(); ++i) {
        if (!s.edge_bits[i]) continue;
        auto less = s;
        less.edge_bits[i] = 0;
        CHECK_FALSE(cube_diameter_ok(less));
      }
    }
}

TEST_CASE("isosceles-free grid sets") {
  CHECK_FALSE(is_isosceles_free(PointSet2D::from_points(5, {{0, 0}, {1, 0}, {2, 0}})));
  CHECK(is_isosceles_free(PointSet2D::from_points(5, {{0, 0}, {3, 4}})));
  Rng rng = make_rng(5);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 8));
    auto p = PointSet2D::empty(n);
    for (auto& x : p.occupied) x = uniform_index(rng, 3) == 0;
    CHECK(count_isosceles(p) == oracles::count_isosceles_naive(p.points()));
    const auto q = local_search_isosceles(p, rng);
    CHECK(oracles::count_isosceles_naive(q.points()) == 0);
    CHECK(is_maximal_isosceles_free(q));
    CHECK(score_isosceles(q) == static_cast<Score>(q.points().size()));
  }
}

TEST_CASE("cosphere determinant") {
  CHECK(cosphere_det({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {3, 5, 0}, {2, 7, 0}) == 0);
  CHECK(cosphere_det({1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}) == 0);
  // (1,1,1) lies on x^2 + y^2 + z^2 = x + y + z with the other four.
  CHECK(cosphere_det({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}) == 0);
  const auto d = cosphere_det({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 2});
  CHECK(d != 0);
  CHECK(static_cast<__int128>(d) == oracles::cosphere_det_naive({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 2}}}));
  Rng rng = make_rng(6);
  for (int t = 0; t < 500; ++t) {
    std::array<Point3, 5> p;
    for (auto& q : p) q = {int(uniform_index(rng, 9)), int(uniform_index(rng, 9)), int(uniform_index(rng, 9))};
    CHECK(static_cast<__int128>(cosphere_det(p[0], p[1], p[2], p[3], p[4])) == oracles::cosphere_det_naive(p));
  }
}

TEST_CASE("sphere local search") {
  Rng rng = make_rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto s = local_search_sphere({}, 2, rng);
    CHECK(s.size() <= 4);
    CHECK(oracles::is_no5_sphere_naive(s.points()));
    CHECK(is_maximal_no5_sphere(s));
  }
  const auto f = fixture("sphere_no5_sets.txt", "sphere_no5_sets_n4");
  const auto seed = PointSet3D::from_payload(f.params.n, f.payload).points();
  REQUIRE(seed.size() == 11);
  const auto out = local_search_sphere(seed, 4, rng);
  for (auto p : seed) CHECK(out.contains(p));
  CHECK(is_no5_sphere(out.points()));

  auto dup = seed;
  dup.push_back(seed.front());
  CHECK(local_search_sphere(dup, 4, rng).size() >= seed.size());

  for (int n = 3; n <= 5; ++n) {
    const auto r = local_search_sphere({}, n, rng);
    CHECK(oracles::is_no5_sphere_naive(r.points()));
    CHECK(is_maximal_no5_sphere(r));
  }
}

TEST_CASE("cube symmetries") {
  const auto& g = cube_symmetry_group();
  std::set<std::pair<std::array<int, 3>, unsigned>> distinct;
  for (const auto& s : g) distinct.insert({s.perm, s.flips});
  CHECK(distinct.size() == 48);
  for (const auto& s : g) {
    const auto inv = inverse(s);
    for (int i = 0; i < 20; ++i) {
      const Point3 p{i % 5, (i * 3) % 5, (i * 7) % 5};
      CHECK(apply(inv, apply(s, p, 5), 5) == p);
    }
  }

  const auto generic = PointSet3D::from_points(6, {{0, 1, 3}, {2, 0, 0}, {5, 4, 1}});
  const auto images = cube_symmetries(generic);
  std::set<std::vector<std::uint8_t>> orbit;
  for (const auto& im : images) {
    orbit.insert(im.occupied);
    CHECK(score_sphere(im) == score_sphere(generic));
  }
  CHECK(orbit.size() == 48);

  const auto central = PointSet3D::from_points(5, {{0, 0, 0}, {4, 4, 4}, {2, 2, 2}});
  std::set<std::vector<std::uint8_t>> small;
  for (const auto& im : cube_symmetries(central)) small.insert(im.occupied);
  CHECK(small.size() < 48);
}

TEST_CASE("saturated Sperner families") {
  for (int n = 1; n <= 6; ++n) {
    auto all = SetFamily::empty(n);
    for (auto& x : all.member) x = 1;
    CHECK(longest_chain(all) == n + 1);
  }
  const auto f = fixture("sperner_saturated_8.txt", "sperner_saturated_8");
  const auto fam = SetFamily::from_payload(f.params.n, f.payload);
  CHECK(fam.size() == 8);
  CHECK(is_saturated_k_sperner(fam, 4));
  CHECK(score_sperner(fam, 4) == -8);

  Rng rng = make_rng(8);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 4));
    const int k = 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    auto start = SetFamily::empty(n);
    for (auto& x : start.member) x = uniform_index(rng, 2);
    const auto s = local_search_sperner(start, k, rng);
    CHECK(is_saturated_k_sperner(s, k));
    CHECK(oracles::longest_chain_naive(s.sets()) <= k);
  }
}

TEST_CASE("cross-Sperner tuples") {
  const auto f = fixture("cross_sperner_pair_4_2.txt", "cross_sperner_pair_4_2_4_2");
  const auto t = SetFamilyTuple::from_payload(f.params.n, f.params.k, f.payload);
  CHECK(score_cross_sperner(t) == 16);
  CHECK(is_cross_sperner(t));

  // Empty set in F1 with F2 nonempty: the repair must remove the empty set or its superset.
  const auto bad = SetFamilyTuple::from_families(3, {{0, 1}, {3, 6}});
  const auto fixed = repair_cross_sperner(bad);
  CHECK(is_cross_sperner(fixed));
  const auto fams = fixed.families();
  const bool empty_kept = std::find(fams[0].begin(), fams[0].end(), 0U) != fams[0].end();
  CHECK((!empty_kept || fams[1].empty()));

  Rng rng = make_rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 4));
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    auto start = SetFamilyTuple::empty(n, k);
    for (auto& o : start.owner) o = static_cast<std::uint8_t>(uniform_index(rng, static_cast<std::size_t>(k + 1)));
    const auto s = local_search_cross_sperner(start, rng);
    CHECK(is_cross_sperner(s));
    CHECK(oracles::is_cross_sperner_naive(s.families()));
    CHECK(is_maximal_cross_sperner(s));
  }
}

TEST_CASE("box covers") {
  CHECK(is_proper({1, 2, 6}));
  CHECK_FALSE(is_proper({7, 1}));
  CHECK_FALSE(is_proper({0, 1}));
  BoxCover c{2, {{7, 1}, {7, 6}}};
  CHECK_FALSE(verify_double_cover(c));
  CHECK(score_box_cover(c) == kInvalidScore);

  // {0} and {1,2} in the first factor, each times {0,1}, {1,2}, {0,2}.
  BoxCover six{2, {{1, 3}, {1, 6}, {1, 5}, {6, 3}, {6, 6}, {6, 5}}};
  CHECK(verify_double_cover(six));
  CHECK(coverage(six) == oracles::coverage_naive(six));
  CHECK(score_box_cover(six) == -6);
  CHECK(BoxCover::from_payload(2, 8, six.to_payload(8)).boxes.size() == 6);

  Rng rng = make_rng(10);
  for (int d = 2; d <= 4; ++d)
    for (int t = 0; t < 5; ++t) {
      const auto s = local_search_box_cover(BoxCover{d, {}}, rng);
      CHECK(verify_double_cover(s));
      CHECK(coverage(s) == oracles::coverage_naive(s));
    }
}

TEST_CASE("every problem round trips its payloads and searches to valid constructions") {
  Rng rng = make_rng(11);
  for (auto id : kAllProblems) {
    CAPTURE(to_string(id));
    ProblemParams params;
    switch (id) {
      case ProblemId::triangle: params.n = 8; break;
      case ProblemId::c4: params.n = 9; break;
      case ProblemId::permanent312: params.n = 6; break;
      case ProblemId::cube: params.n = 4; break;
      case ProblemId::isosceles: params.n = 7; break;
      case ProblemId::sphere: params.n = 4; break;
      case ProblemId::sperner: params.n = 5; params.k = 2; break;
      case ProblemId::cross_sperner: params.n = 4; params.k = 3; break;
      case ProblemId::box_cover: params.n = 3; break;
    }
    const auto problem = make_problem(id, params);
    CHECK(problem->empty_start().size() == problem->payload_length());
    for (int t = 0; t < 10; ++t) {
      const auto p = problem->random_payload(rng);
      REQUIRE(p.size() == problem->payload_length());
      for (auto s : p) CHECK(s < problem->alphabet());
      const auto base = problem->to_base(p);
      if (problem->base_length()) CHECK(base.size() == *problem->base_length());
      const auto back = problem->from_base(base);
      REQUIRE(back.has_value());
      CHECK(problem->score(*back) == problem->score(p));

      const auto q = problem->local_search(p, rng);
      CHECK(problem->is_valid(q));
      const auto aug = problem->augment(q);
      REQUIRE_FALSE(aug.empty());
      CHECK(aug.front() == q);
      for (const auto& a : aug) CHECK(problem->score(a) == problem->score(q));
    }
    if (problem->base_length()) CHECK_FALSE(problem->from_base({0}).has_value());
  }
  CHECK_THROWS_AS(make_problem(ProblemId::triangle, ProblemParams{.n = 1}), std::invalid_argument);
}
