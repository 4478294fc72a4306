#include "patternboost/problems/isosceles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

void check_side(int n) {
  if (n < 1 || n > 1024) throw std::invalid_argument("grid side must be in [1, 1024]");
}

// Per-apex counts of squared distances, for the points currently in the set.
class DistanceTable {
 public:
  explicit DistanceTable(int n)
      : n_(n), max_d2_(2 * static_cast<std::size_t>(n - 1) * (n - 1)), rows_(static_cast<std::size_t>(n) * n),
        stamp_(max_d2_ + 1, 0) {}

  Point2 point(std::size_t i) const { return {static_cast<int>(i / n_), static_cast<int>(i % n_)}; }
  std::size_t index(Point2 p) const { return static_cast<std::size_t>(p.x) * n_ + p.y; }

  void add(std::size_t q) {
    auto& row = rows_[q];
    row.assign(max_d2_ + 1, 0);
    for (std::size_t s : members_) {
      auto d = static_cast<std::size_t>(dist2(point(q), point(s)));
      ++row[d];
      ++rows_[s][d];
    }
    members_.push_back(q);
  }

  void remove(std::size_t q) {
    members_.erase(std::find(members_.begin(), members_.end(), q));
    for (std::size_t s : members_) --rows_[s][static_cast<std::size_t>(dist2(point(q), point(s)))];
    rows_[q].clear();
    rows_[q].shrink_to_fit();
  }

  // Adding q keeps the set free iff q sees every member at a distinct distance and no
  // member sees q at a distance it already uses.
  bool admissible(std::size_t q) {
    ++epoch_;
    if (epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    for (std::size_t s : members_) {
      auto d = static_cast<std::size_t>(dist2(point(q), point(s)));
      if (rows_[s][d] != 0 || stamp_[d] == epoch_) return false;
      stamp_[d] = epoch_;
    }
    return true;
  }

  // Isosceles triples through each member, as apex or as an endpoint.
  std::vector<std::size_t> triples_per_member() const {
    std::vector<std::size_t> out;
    out.reserve(members_.size());
    for (std::size_t q : members_) {
      std::size_t t = 0;
      for (std::size_t s : members_) {
        if (s == q) continue;
        auto d = static_cast<std::size_t>(dist2(point(q), point(s)));
        // q as apex, s one leg: every other member at the same distance; each pair
        // {s, s'} is seen twice, so halve at the end via the (c - 1) / 2 split.
        t += rows_[q][d] - 1;
        // s as apex, q one leg.
        t += 2 * static_cast<std::size_t>(rows_[s][d] - 1);
      }
      out.push_back(t / 2);
    }
    return out;
  }

  std::size_t total_triples() const {
    std::size_t t = 0;
    for (std::size_t q : members_)
      for (std::uint16_t c : rows_[q]) t += static_cast<std::size_t>(c) * (c - (c > 0)) / 2;
    return t;
  }

  const std::vector<std::size_t>& members() const { return members_; }

 private:
  int n_;
  std::size_t max_d2_;
  std::vector<std::vector<std::uint16_t>> rows_;
  std::vector<std::size_t> members_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

DistanceTable table_of(const PointSet2D& p) {
  DistanceTable t(p.n);
  for (std::size_t i = 0; i < p.occupied.size(); ++i)
    if (p.occupied[i]) t.add(i);
  return t;
}

}  // namespace

PointSet2D PointSet2D::empty(int n) {
  check_side(n);
  return PointSet2D{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
}

PointSet2D PointSet2D::from_payload(int n, const Payload& payload) {
  check_side(n);
  if (payload.size() != static_cast<std::size_t>(n) * n)
    throw ShapeError("isosceles payload has " + std::to_string(payload.size()) + " cells, expected " +
                     std::to_string(n * n));
  for (auto b : payload)
    if (b > 1) throw ShapeError("isosceles payload symbol must be 0 or 1");
  return PointSet2D{n, payload};
}

PointSet2D PointSet2D::from_points(int n, const std::vector<Point2>& pts) {
  auto s = empty(n);
  for (auto p : pts) {
    if (p.x < 0 || p.y < 0 || p.x >= n || p.y >= n)
      throw std::invalid_argument("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                  ") outside the grid");
    if (s.contains(p))
      throw std::invalid_argument("repeated point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    s.insert(p);
  }
  return s;
}

std::vector<Point2> PointSet2D::points() const {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i]) out.push_back({static_cast<int>(i / n), static_cast<int>(i % n)});
  return out;
}

std::size_t PointSet2D::size() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

std::size_t count_isosceles(const PointSet2D& p) { return table_of(p).total_triples(); }

bool is_isosceles_free(const PointSet2D& p) { return count_isosceles(p) == 0; }

bool is_maximal_isosceles_free(const PointSet2D& p) {
  auto t = table_of(p);
  if (t.total_triples() != 0) return false;
  for (std::size_t i = 0; i < p.occupied.size(); ++i)
    if (!p.occupied[i] && t.admissible(i)) return false;
  return true;
}

Score score_isosceles(const PointSet2D& p) {
  return static_cast<Score>(p.size()) - 2 * static_cast<Score>(count_isosceles(p));
}

PointSet2D local_search_isosceles(PointSet2D p, Rng& rng) {
  auto t = table_of(p);

  std::vector<std::size_t> worst;
  for (;;) {
    auto per = t.triples_per_member();
    std::size_t best = 0;
    for (auto c : per) best = std::max(best, c);
    if (best == 0) break;
    worst.clear();
    for (std::size_t i = 0; i < per.size(); ++i)
      if (per[i] == best) worst.push_back(t.members()[i]);
    std::size_t q = worst[uniform_index(rng, worst.size())];
    t.remove(q);
    p.occupied[q] = 0;
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < p.occupied.size(); ++i)
    if (!p.occupied[i]) candidates.push_back(i);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (std::size_t q : candidates)
    if (t.admissible(q)) {
      t.add(q);
      p.occupied[q] = 1;
    }
  return p;
}

}  // namespace pb::problems
