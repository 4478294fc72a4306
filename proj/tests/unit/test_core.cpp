#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "patternboost/core/pool.hpp"
#include "patternboost/core/rng.hpp"

using namespace pb;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("pb_core_" + name); }

}  // namespace

TEST_CASE("problem ids round trip through their names") {
  for (auto id : kAllProblems) CHECK(problem_from_string(to_string(id)) == id);
  CHECK_THROWS_AS(problem_from_string("hexagon"), std::invalid_argument);
}

TEST_CASE("derived seeds are stable and path dependent") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {}) != derive_seed(2, {}));
  Rng a = make_rng(5, {1}), b = make_rng(5, {1});
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = uniform_index(a, 7);
    CHECK(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("pool orders by score then payload and deduplicates") {
  Pool p(ProblemId::triangle, 3, 10);
  CHECK(p.insert({1, 0, 0}, 1) == Pool::InsertResult::inserted);
  CHECK(p.insert({0, 1, 1}, 2) == Pool::InsertResult::inserted);
  CHECK(p.insert({0, 0, 1}, 1) == Pool::InsertResult::inserted);
  CHECK(p.insert({0, 1, 1}, 2) == Pool::InsertResult::duplicate);
  const auto e = p.entries();
  REQUIRE(e.size() == 3);
  CHECK(e[0].score == 2);
  CHECK(e[1].construction.payload == Payload{0, 0, 1});
  CHECK(e[2].construction.payload == Payload{1, 0, 0});
  CHECK(p.best_score() == 2);
  CHECK(p.min_score() == 1);
  CHECK(p.mean_score() == doctest::Approx(4.0 / 3));
}

TEST_CASE("full pool admits only strictly better entries and evicts the worst") {
  Pool p(ProblemId::triangle, 2, 2);
  p.insert({0, 0}, 5);
  p.insert({0, 1}, 5);
  CHECK(p.full());
  CHECK(p.insert({1, 0}, 5) == Pool::InsertResult::below_minimum);
  CHECK(p.insert({1, 1}, 6) == Pool::InsertResult::inserted);
  CHECK(p.size() == 2);
  CHECK(p.contains({0, 0}));
  CHECK_FALSE(p.contains({0, 1}));  // ties evict the larger payload
}

TEST_CASE("pool rejects foreign shapes") {
  Pool p(ProblemId::triangle, 2, 4);
  CHECK_THROWS_AS(p.insert({0, 0, 0}, 1), ShapeError);
  CHECK_THROWS_AS(p.insert({0, 10}, 1), ShapeError);
  CHECK_THROWS_AS(p.insert(ScoredConstruction{{ProblemId::c4, {0, 0}}, 1}), ShapeError);
  CHECK_THROWS_AS(Pool(ProblemId::triangle, 2, 0), std::invalid_argument);
  CHECK(p.empty());
}

TEST_CASE("pool files round trip and malformed files name the line") {
  Pool p(ProblemId::sphere, 4, 8);
  p.insert({1, 0, 0, 1}, 2);
  p.insert({0, 0, 0, 1}, 1);
  p.insert({9, 0, 3, 1}, -4);
  const auto path = temp_file("pool.txt");
  p.save(path);
  CHECK(Pool::load(path, 8) == p);

  {
    std::ofstream out(path);
    out << "patternboost-pool v1 sphere 4\n2\t1001\n3\t10x1\n";
  }
  try {
    Pool::load(path, 8);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "patternboost-pool v2 sphere 4\n";
  }
  CHECK_THROWS_AS(Pool::load(path, 8), std::runtime_error);
  fs::remove(path);
}
