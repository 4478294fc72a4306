#include <array>
#include <stdexcept>
#include <string>

#include "patternboost/core/construction.hpp"

namespace pb {

namespace {
constexpr std::array<std::string_view, 9> kNames = {
    "triangle", "c4", "permanent312", "cube", "isosceles",
    "sphere", "sperner", "cross_sperner", "box_cover"};
}

std::string_view to_string(ProblemId id) { return kNames.at(static_cast<std::size_t>(id)); }

ProblemId problem_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<ProblemId>(i);
  throw std::invalid_argument("unknown problem id '" + std::string(name) + "'");
}

}  // namespace pb
