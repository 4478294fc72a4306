#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "patternboost/core/construction.hpp"
#include "patternboost/problems/problem.hpp"

namespace pb::oracles {

/// A published construction and the metrics claimed for it.
struct Fixture {
  std::string name;
  ProblemId problem = ProblemId::triangle;
  problems::ProblemParams params;
  Payload payload;
  /// Claimed metrics, e.g. "size", "edges", "diameter", "product", "permanent", "grid".
  std::map<std::string, std::int64_t> claims;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;  // witness on failure
};

struct FixtureReport {
  std::string fixture;
  std::vector<Assertion> assertions;
  bool ok() const;
};

/// Files every installation must ship, in verification order.
const std::vector<std::string>& fixture_files();

/// Parses one fixture file; the kind is taken from the file name prefix. Throws
/// std::runtime_error naming the file and line on malformed input.
std::vector<Fixture> load_fixture_file(const std::filesystem::path& path);
/// All fixture_files() under dir. Throws std::runtime_error listing missing files.
std::vector<Fixture> load_fixture_dir(const std::filesystem::path& dir);

/// Checks validity and every claimed metric with the problem verifiers and, where they
/// exist, the naive references.
FixtureReport verify_fixture(const Fixture& f);

/// `PASS|FAIL <fixture> <assertion>` lines, with the witness appended to failures.
std::string format_report(const FixtureReport& r);

}  // namespace pb::oracles
