#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pb {

/// The nine problems the framework knows how to score and search.
enum class ProblemId : std::uint8_t {
  triangle,       // triangle-free graphs, maximize edges
  c4,             // no 4-cycles, maximize edges
  permanent312,   // 312-avoiding binary matrices, maximize the permanent
  cube,           // spanning diameter-d subgraphs of the d-cube, minimize edges
  isosceles,      // no isosceles triangles in the n x n grid
  sphere,         // no 5 points on a sphere in the n x n x n grid
  sperner,        // small saturated k-Sperner families
  cross_sperner,  // cross-Sperner tuples, maximize the product of sizes
  box_cover,      // double covers of {0,1,2}^d by proper boxes
};

inline constexpr ProblemId kAllProblems[] = {
    ProblemId::triangle,  ProblemId::c4,     ProblemId::permanent312,
    ProblemId::cube,      ProblemId::isosceles, ProblemId::sphere,
    ProblemId::sperner,   ProblemId::cross_sperner, ProblemId::box_cover};

std::string_view to_string(ProblemId id);
/// Throws std::invalid_argument naming the unknown id.
ProblemId problem_from_string(std::string_view name);

using Score = std::int64_t;
/// Sentinel for constructions that cannot be scored at all (e.g. a non-proper box).
inline constexpr Score kInvalidScore = std::numeric_limits<Score>::min();

/// Problem-defined symbols, each small enough to print as a single digit.
using Payload = std::vector<std::uint8_t>;

struct Construction {
  ProblemId problem = ProblemId::triangle;
  Payload payload;

  friend bool operator==(const Construction&, const Construction&) = default;
  friend auto operator<=>(const Construction&, const Construction&) = default;
};

struct ScoredConstruction {
  Construction construction;
  Score score = 0;

  friend bool operator==(const ScoredConstruction&, const ScoredConstruction&) = default;
};

/// Raised when a payload does not match the shape a pool or problem declared.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pb
