#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "patternboost/cli/config.hpp"

using namespace pb;
using namespace pb::cli;

TEST_CASE("minimal config takes the problem defaults") {
  const auto c = parse_config_text("problem = triangle\nn = 20\n");
  CHECK(c == default_config(ProblemId::triangle));
  CHECK(c.params.n == 20);
  CHECK(c.seed_runs == 40000);
  CHECK(c.pool_capacity == 10000);
  CHECK(c.selection_fraction == 0.25);
  CHECK(c.layers == 2);
  CHECK(c.dim == 16);
  CHECK(c.heads == 4);
  CHECK(c.bpe_vocab == 100);
  CHECK(c.tokenizer == tokenizer::CodecKind::bpe);
}

TEST_CASE("overrides, sections and comments") {
  const auto c = parse_config_text(
      "# demo\n[run]\nproblem = c4\nseed = 7\n\n[pool]\nselection_fraction = 0.5  # half\n[model]\ndim = 32\n",
      {"selection_fraction=0.10", "generations=3"});
  CHECK(c.problem == ProblemId::c4);
  CHECK(c.seed == 7);
  CHECK(c.selection_fraction == 0.10);
  CHECK(c.generations == 3);
  CHECK(c.dim == 32);
}

TEST_CASE("bad configs name the line") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text, {}, "demo.conf");
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("problem = triangle\nheads = 3\n").find("heads") != std::string::npos);
  CHECK(message("problem = triangle\nwidgets = 3\n").find("demo.conf:2") != std::string::npos);
  CHECK(message("problem = triangle\n[gpu]\n").find("demo.conf:2") != std::string::npos);
  CHECK(message("problem = triangle\nn = twenty\n").find("demo.conf:2") != std::string::npos);
  CHECK(message("n = 20\n").find("problem") != std::string::npos);
  CHECK(message("problem = hexagon\n") != "");
  CHECK(message("problem = triangle\nn 20\n") != "");
}

TEST_CASE("echo is a fixed point") {
  for (auto id : kAllProblems) {
    CAPTURE(to_string(id));
    auto c = default_config(id);
    c.seed = 123456789012345ULL;
    c.adam.lr = 1.0 / 3;
    c.output_dir = "/tmp/some run";
    const auto text = echo_config(c);
    CHECK(parse_config_text(text) == c);
    CHECK(echo_config(parse_config_text(text)) == text);
  }
}

TEST_CASE("seed from the environment") {
  auto c = default_config(ProblemId::triangle);
  ::setenv("PATTERNBOOST_SEED", "99", 1);
  apply_seed_env(c);
  CHECK(c.seed == 99);
  ::setenv("PATTERNBOOST_SEED", "x", 1);
  CHECK_THROWS_AS(apply_seed_env(c), std::invalid_argument);
  ::unsetenv("PATTERNBOOST_SEED");
  apply_seed_env(c);
  CHECK(c.seed == 99);
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "pb_cli.conf";
  {
    std::ofstream out(path);
    out << "problem = sphere\nn = 5\n";
  }
  const auto c = parse_config(path, {"workers=2"});
  CHECK(c.problem == ProblemId::sphere);
  CHECK(c.params.n == 5);
  CHECK(c.workers == 2);
  std::filesystem::remove(path);
  CHECK_THROWS(parse_config(path));
}
