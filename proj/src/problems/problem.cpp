#include "patternboost/problems/problem.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "patternboost/problems/box_cover.hpp"
#include "patternboost/problems/c4.hpp"
#include "patternboost/problems/cross_sperner.hpp"
#include "patternboost/problems/hypercube.hpp"
#include "patternboost/problems/isosceles.hpp"
#include "patternboost/problems/pattern312.hpp"
#include "patternboost/problems/permanent.hpp"
#include "patternboost/problems/sphere.hpp"
#include "patternboost/problems/sperner.hpp"
#include "patternboost/problems/triangle.hpp"
#include "patternboost/tokenizer/flatten.hpp"

namespace pb::problems {

Payload Problem::random_payload(Rng& rng) const {
  const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::bernoulli_distribution on(density);
  Payload p(payload_length(), 0);
  for (auto& s : p)
    if (on(rng)) s = static_cast<std::uint8_t>(alphabet() == 2 ? 1 : 1 + uniform_index(rng, static_cast<std::size_t>(alphabet() - 1)));
  return p;
}

std::vector<std::string> Problem::base_labels() const {
  std::vector<std::string> labels;
  for (int s = 0; s < alphabet(); ++s) labels.push_back(std::to_string(s));
  return labels;
}

std::vector<int> Problem::to_base(const Payload& p) const { return {p.begin(), p.end()}; }

std::optional<Payload> Problem::from_base(const std::vector<int>& base) const {
  if (base.size() != payload_length()) return std::nullopt;
  Payload p(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] < 0 || base[i] >= alphabet()) return std::nullopt;
    p[i] = static_cast<std::uint8_t>(base[i]);
  }
  return p;
}

std::optional<Payload> Problem::from_sample(const std::vector<int>& base, Rng& rng, bool local) const {
  auto p = from_base(base);
  if (!p) return std::nullopt;
  if (!local) return p;
  return local_search(*p, rng);
}

void Problem::check_shape(const Payload& p) const {
  if (p.size() != payload_length())
    throw ShapeError(std::string(to_string(id_)) + " payload has length " + std::to_string(p.size()) + ", expected " +
                     std::to_string(payload_length()));
  for (auto s : p)
    if (s >= alphabet()) throw ShapeError(std::string(to_string(id_)) + " payload symbol out of range");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

class GraphProblem : public Problem {
 public:
  GraphProblem(ProblemId id, ProblemParams p) : Problem(id, p) {
    require(p.n >= 2 && p.n <= kMaxGraphVertices, "graph problems need 2 <= n <= 64");
  }
  std::size_t payload_length() const override { return edge_slots(params().n); }
  int alphabet() const override { return 2; }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

  std::vector<std::string> base_labels() const override {
    if (params().delimiters) return {"0", "1", ","};
    return {"0", "1"};
  }
  std::vector<int> to_base(const Payload& p) const override {
    auto s = tokenizer::flatten_graph(graph(p), options());
    std::vector<int> out;
    out.reserve(s.size());
    for (char c : s) out.push_back(c == ',' ? 2 : c - '0');
    return out;
  }
  std::optional<Payload> from_base(const std::vector<int>& base) const override {
    std::string s;
    s.reserve(base.size());
    for (int b : base) {
      if (b < 0 || b > (params().delimiters ? 2 : 1)) return std::nullopt;
      s.push_back(b == 2 ? ',' : static_cast<char>('0' + b));
    }
    try {
      return tokenizer::unflatten_graph(s, params().n, options()).bits;
    } catch (const tokenizer::DecodeError&) {
      return std::nullopt;
    }
  }

 protected:
  GraphBits graph(const Payload& p) const { return GraphBits::from_payload(params().n, p); }
  tokenizer::FlattenOptions options() const { return {params().delimiters, params().include_diagonal}; }
};

class TriangleProblem final : public GraphProblem {
 public:
  explicit TriangleProblem(ProblemParams p) : GraphProblem(ProblemId::triangle, p) {}
  Score score(const Payload& p) const override { return score_triangle(graph(p)); }
  bool is_valid(const Payload& p) const override { return is_triangle_free(graph(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_triangle(graph(p), rng).bits;
  }
};

class C4Problem final : public GraphProblem {
 public:
  explicit C4Problem(ProblemParams p) : GraphProblem(ProblemId::c4, p) {}
  Score score(const Payload& p) const override { return score_c4(graph(p)); }
  bool is_valid(const Payload& p) const override { return is_c4_free(graph(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override { return local_search_c4(graph(p), rng).bits; }
};

class PermanentProblem final : public Problem {
 public:
  explicit PermanentProblem(ProblemParams p) : Problem(ProblemId::permanent312, p) {
    require(p.n >= 1 && p.n <= kMaxPermanentSide, "permanent312 needs 1 <= n <= 30");
  }
  std::size_t payload_length() const override { return static_cast<std::size_t>(params().n) * params().n; }
  int alphabet() const override { return 2; }
  Score score(const Payload& p) const override { return permanent_score(matrix(p)); }
  bool is_valid(const Payload& p) const override { return !contains_312(matrix(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override { return local_search_312(matrix(p), rng).a; }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

 private:
  BinaryMatrix matrix(const Payload& p) const { return BinaryMatrix::from_payload(params().n, p); }
};

class CubeProblem final : public Problem {
 public:
  explicit CubeProblem(ProblemParams p) : Problem(ProblemId::cube, p) {
    require(p.n >= 1 && p.n <= kMaxCubeDimension, "cube needs 1 <= n (the dimension) <= 12");
  }
  std::size_t payload_length() const override { return cube_edge_slots(params().n); }
  int alphabet() const override { return 2; }
  Score score(const Payload& p) const override { return score_cube(sub(p)); }
  bool is_valid(const Payload& p) const override { return cube_diameter_ok(sub(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_cube(sub(p), rng).edge_bits;
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

 private:
  CubeSubgraph sub(const Payload& p) const { return CubeSubgraph::from_payload(params().n, p); }
};

class IsoscelesProblem final : public Problem {
 public:
  explicit IsoscelesProblem(ProblemParams p) : Problem(ProblemId::isosceles, p) {
    require(p.n >= 1 && p.n <= 1024, "isosceles needs 1 <= n <= 1024");
  }
  std::size_t payload_length() const override { return static_cast<std::size_t>(params().n) * params().n; }
  int alphabet() const override { return 2; }
  Score score(const Payload& p) const override { return score_isosceles(set(p)); }
  bool is_valid(const Payload& p) const override { return is_isosceles_free(set(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_isosceles(set(p), rng).occupied;
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

 private:
  PointSet2D set(const Payload& p) const { return PointSet2D::from_payload(params().n, p); }
};

// Streams are ordered point indices; the order is the seed order of the local search.
class SphereProblem final : public Problem {
 public:
  explicit SphereProblem(ProblemParams p) : Problem(ProblemId::sphere, p) {
    require(p.n >= 1 && p.n <= kMaxSphereGrid, "sphere needs 1 <= n <= 24");
  }
  std::size_t payload_length() const override {
    return static_cast<std::size_t>(params().n) * params().n * params().n;
  }
  int alphabet() const override { return 2; }
  Score score(const Payload& p) const override { return score_sphere(set(p)); }
  bool is_valid(const Payload& p) const override { return is_no5_sphere(set(p).points()); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_sphere(set(p).points(), params().n, rng).occupied;
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

  std::optional<std::size_t> base_length() const override { return std::nullopt; }
  std::vector<std::string> base_labels() const override {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < payload_length(); ++i) labels.push_back(std::to_string(i));
    return labels;
  }
  std::vector<int> to_base(const Payload& p) const override {
    check_shape(p);
    std::vector<int> out;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i]) out.push_back(static_cast<int>(i));
    return out;
  }
  std::optional<Payload> from_base(const std::vector<int>& base) const override {
    Payload p(payload_length(), 0);
    for (int b : base) {
      if (b < 0 || static_cast<std::size_t>(b) >= p.size()) return std::nullopt;
      p[static_cast<std::size_t>(b)] = 1;
    }
    return p;
  }
  std::optional<Payload> from_sample(const std::vector<int>& base, Rng& rng, bool local) const override {
    if (!local) return from_base(base);
    std::vector<Point3> seed;
    seed.reserve(base.size());
    for (int b : base) {
      if (b < 0 || static_cast<std::size_t>(b) >= payload_length()) return std::nullopt;
      seed.push_back(point_at(b, params().n));
    }
    return local_search_sphere(seed, params().n, rng).occupied;
  }
  std::vector<Payload> augment(const Payload& p) const override {
    std::vector<Payload> out;
    out.reserve(48);
    for (auto& img : cube_symmetries(set(p))) out.push_back(std::move(img.occupied));
    return out;
  }

 private:
  PointSet3D set(const Payload& p) const { return PointSet3D::from_payload(params().n, p); }
};

class SpernerProblem final : public Problem {
 public:
  explicit SpernerProblem(ProblemParams p) : Problem(ProblemId::sperner, p) {
    require(p.n >= 1 && p.n <= kMaxGroundSet, "sperner needs 1 <= n <= 20");
    require(p.k >= 1, "sperner needs k >= 1");
  }
  std::size_t payload_length() const override { return std::size_t{1} << params().n; }
  int alphabet() const override { return 2; }
  Score score(const Payload& p) const override { return score_sperner(family(p), params().k); }
  bool is_valid(const Payload& p) const override { return is_k_sperner(family(p), params().k); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_sperner(family(p), params().k, rng).member;
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

 private:
  SetFamily family(const Payload& p) const { return SetFamily::from_payload(params().n, p); }
};

class CrossSpernerProblem final : public Problem {
 public:
  explicit CrossSpernerProblem(ProblemParams p) : Problem(ProblemId::cross_sperner, p) {
    require(p.n >= 1 && p.n <= kMaxGroundSet, "cross_sperner needs 1 <= n <= 20");
    require(p.k >= 2 && p.k <= kMaxCrossFamilies, "cross_sperner needs 2 <= k <= 9");
  }
  std::size_t payload_length() const override { return std::size_t{1} << params().n; }
  int alphabet() const override { return params().k + 1; }
  Score score(const Payload& p) const override { return score_cross_sperner(tuple(p)); }
  bool is_valid(const Payload& p) const override { return is_cross_sperner(tuple(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    return local_search_cross_sperner(tuple(p), rng).owner;
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }

 private:
  SetFamilyTuple tuple(const Payload& p) const { return SetFamilyTuple::from_payload(params().n, params().k, p); }
};

// Streams list the used slots only, d digits per box.
class BoxCoverProblem final : public Problem {
 public:
  explicit BoxCoverProblem(ProblemParams p) : Problem(ProblemId::box_cover, p) {
    require(p.n >= 1 && p.n <= kMaxBoxDimension, "box_cover needs 1 <= n (the dimension) <= 8");
    require(p.max_boxes >= 0, "max_boxes must be non-negative");
    require(p.over_weight >= 0 && p.under_weight >= 0, "box_cover weights must be non-negative");
    slots_ = p.max_boxes > 0 ? static_cast<std::size_t>(p.max_boxes) : 2 * box_points(p.n);
  }
  std::size_t payload_length() const override { return slots_ * static_cast<std::size_t>(params().n); }
  int alphabet() const override { return 8; }
  Score score(const Payload& p) const override {
    return score_box_cover(cover(p), {params().over_weight, params().under_weight});
  }
  bool is_valid(const Payload& p) const override { return verify_double_cover(cover(p)); }
  Payload local_search(const Payload& p, Rng& rng) const override {
    auto c = local_search_box_cover(cover(p), rng);
    if (c.boxes.size() > slots_) c.boxes.resize(slots_);
    return c.to_payload(slots_);
  }
  Payload empty_start() const override { return Payload(payload_length(), 0); }
  Payload random_payload(Rng& rng) const override {
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::bernoulli_distribution used(density);
    BoxCover c{params().n, {}};
    for (std::size_t s = 0; s < slots_; ++s)
      if (used(rng)) {
        Box b(static_cast<std::size_t>(params().n));
        for (auto& f : b) f = static_cast<std::uint8_t>(1 + uniform_index(rng, 6));
        c.boxes.push_back(std::move(b));
      }
    return c.to_payload(slots_);
  }

  std::optional<std::size_t> base_length() const override { return std::nullopt; }
  std::vector<int> to_base(const Payload& p) const override {
    auto c = cover(p);
    std::vector<int> out;
    for (const auto& b : c.boxes) out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  std::optional<Payload> from_base(const std::vector<int>& base) const override {
    const auto d = static_cast<std::size_t>(params().n);
    if (base.size() % d != 0 || base.size() > payload_length()) return std::nullopt;
    Payload p(payload_length(), 0);
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] < 1 || base[i] > 7) return std::nullopt;
      p[i] = static_cast<std::uint8_t>(base[i]);
    }
    try {
      return cover(p).to_payload(slots_);
    } catch (const ShapeError&) {
      return std::nullopt;
    }
  }

 private:
  BoxCover cover(const Payload& p) const { return BoxCover::from_payload(params().n, slots_, p); }
  std::size_t slots_;
};

}  // namespace

std::unique_ptr<Problem> make_problem(ProblemId id, const ProblemParams& params) {
  switch (id) {
    case ProblemId::triangle: return std::make_unique<TriangleProblem>(params);
    case ProblemId::c4: return std::make_unique<C4Problem>(params);
    case ProblemId::permanent312: return std::make_unique<PermanentProblem>(params);
    case ProblemId::cube: return std::make_unique<CubeProblem>(params);
    case ProblemId::isosceles: return std::make_unique<IsoscelesProblem>(params);
    case ProblemId::sphere: return std::make_unique<SphereProblem>(params);
    case ProblemId::sperner: return std::make_unique<SpernerProblem>(params);
    case ProblemId::cross_sperner: return std::make_unique<CrossSpernerProblem>(params);
    case ProblemId::box_cover: return std::make_unique<BoxCoverProblem>(params);
  }
  throw std::invalid_argument("unknown problem id");
}

}  // namespace pb::problems
