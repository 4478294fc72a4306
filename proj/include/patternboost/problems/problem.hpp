#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/core/rng.hpp"

namespace pb::problems {

/// Size parameters shared by all problems; each problem reads the ones it needs.
struct ProblemParams {
  int n = 20;                 // vertices, matrix side, grid side, ground set or cube dimension
  int k = 2;                  // chain bound (sperner) or family count (cross_sperner)
  bool delimiters = true;     // graph problems: ',' after each adjacency row in the token stream
  bool include_diagonal = false;
  int max_boxes = 0;          // box_cover payload slots; 0 means 2 * 3^d
  int over_weight = 3;
  int under_weight = 1;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

/// Everything the loop needs to know about a problem: payload shape, score, validity,
/// local search, and the symbol stream the tokenizer sees.
class Problem {
 public:
  Problem(ProblemId id, ProblemParams params) : id_(id), params_(params) {}
  virtual ~Problem() = default;

  ProblemId id() const { return id_; }
  const ProblemParams& params() const { return params_; }

  virtual std::size_t payload_length() const = 0;
  /// Payload symbols lie in [0, alphabet()).
  virtual int alphabet() const = 0;

  virtual Score score(const Payload& p) const = 0;
  virtual bool is_valid(const Payload& p) const = 0;
  virtual Payload local_search(const Payload& p, Rng& rng) const = 0;
  /// The trivial start used to build the seed database.
  virtual Payload empty_start() const = 0;
  /// Random construction; each symbol is nonzero with a density drawn from U(0, 1).
  virtual Payload random_payload(Rng& rng) const;

  /// Symbols of the stream handed to the tokenizer, printed as their labels.
  virtual std::vector<std::string> base_labels() const;
  virtual std::vector<int> to_base(const Payload& p) const;
  /// Length shared by every stream, or nullopt when streams vary in length.
  virtual std::optional<std::size_t> base_length() const { return to_base(empty_start()).size(); }
  /// nullopt when the stream does not describe a construction of this shape.
  virtual std::optional<Payload> from_base(const std::vector<int>& base) const;

  /// A decoded sample as the loop uses it: local search from the decoded construction,
  /// or the construction itself when `local` is false. nullopt for invalid decodes.
  virtual std::optional<Payload> from_sample(const std::vector<int>& base, Rng& rng, bool local) const;

  /// Constructions inserted alongside a search result (the result itself first).
  virtual std::vector<Payload> augment(const Payload& p) const { return {p}; }

  void check_shape(const Payload& p) const;

 private:
  ProblemId id_;
  ProblemParams params_;
};

/// Throws std::invalid_argument when the parameters are out of range for the problem.
std::unique_ptr<Problem> make_problem(ProblemId id, const ProblemParams& params);

}  // namespace pb::problems
