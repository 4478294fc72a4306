#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "patternboost/core/construction.hpp"

namespace pb {

/// Deduplicated top-K store of scored constructions, the training database of the loop.
///
/// Entries are ordered by score descending, ties by payload ascending. When full, a
/// new construction is admitted only if its score strictly exceeds the current
/// minimum; the evicted entry is the lowest-scoring one with the lexicographically
/// largest payload.
class Pool {
 public:
  enum class InsertResult { inserted, duplicate, below_minimum };

  Pool(ProblemId problem, std::size_t payload_length, std::size_t capacity);

  /// Throws ShapeError when the construction belongs to another problem, has the
  /// wrong payload length, or uses a symbol above 9 (the file format stores digits).
  InsertResult insert(const ScoredConstruction& c);
  InsertResult insert(Payload payload, Score score);

  bool contains(const Payload& payload) const { return index_.contains(key(payload)); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= capacity_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t payload_length() const { return payload_length_; }
  ProblemId problem() const { return problem_; }

  /// Best first.
  std::vector<ScoredConstruction> entries() const;
  std::optional<Score> best_score() const;
  std::optional<Score> min_score() const;
  double mean_score() const;

  /// Line format: header `patternboost-pool v1 <problem_id> <payload_len>`, then
  /// `<score>\t<digits>` per entry, best first.
  void save(const std::filesystem::path& path) const;
  /// Throws std::runtime_error naming the offending line on malformed input.
  static Pool load(const std::filesystem::path& path, std::size_t capacity);

  friend bool operator==(const Pool& a, const Pool& b);

 private:
  struct Entry {
    Score score;
    Payload payload;
  };
  struct Order {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.score != b.score) return a.score > b.score;
      return a.payload < b.payload;
    }
  };
  static std::string key(const Payload& p) { return std::string(p.begin(), p.end()); }

  ProblemId problem_;
  std::size_t payload_length_;
  std::size_t capacity_;
  std::set<Entry, Order> entries_;
  std::unordered_set<std::string> index_;
};

}  // namespace pb
