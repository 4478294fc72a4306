// Command-line front end: seed, run, resume, verify, sample, histogram, oracle.
// Logs go to stderr; stdout carries only machine-readable output.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patternboost/cli/config.hpp"
#include "patternboost/loop/loop.hpp"
#include "patternboost/oracles/brute.hpp"
#include "patternboost/oracles/fixtures.hpp"

namespace fs = std::filesystem;
using namespace pb;

namespace {

void install_logger() {
  const auto t0 = std::chrono::steady_clock::now();
  loop::set_logger([t0](const std::string& msg) {
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "t=%.1fs %s\n", t, msg.c_str());
  });
}

loop::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  auto cfg = cli::parse_config(path, overrides);
  cli::apply_seed_env(cfg);
  cfg.validate();
  return cfg;
}

std::string digits(const Payload& p) {
  std::string s;
  s.reserve(p.size());
  for (auto v : p) s.push_back(static_cast<char>('0' + v));
  return s;
}

int cmd_verify(const fs::path& dir) {
  std::vector<oracles::Fixture> fixtures;
  try {
    fixtures = oracles::load_fixture_dir(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  bool ok = true;
  for (const auto& f : fixtures) {
    const auto rep = oracles::verify_fixture(f);
    std::cout << oracles::format_report(rep);
    ok = ok && rep.ok();
  }
  return ok ? 0 : 1;
}

int cmd_histogram(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot read " + csv.string());
  std::string line;
  std::getline(in, line);
  if (line != "generation,score,count") throw std::runtime_error(csv.string() + ": not a stats.csv file");
  std::map<int, std::map<Score, std::size_t>> gens;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int g = 0;
    long long s = 0;
    unsigned long long c = 0;
    if (std::sscanf(line.c_str(), "%d,%lld,%llu", &g, &s, &c) != 3)
      throw std::runtime_error(csv.string() + ":" + std::to_string(line_no) + ": malformed row");
    gens[g][s] += c;
  }
  for (const auto& [g, hist] : gens) {
    std::size_t total = 0, peak = 0;
    for (const auto& [s, c] : hist) {
      total += c;
      peak = std::max(peak, c);
    }
    std::cout << "generation " << g << ": " << total << " distinct, best " << hist.rbegin()->first << ", mode "
              << loop::modal_score(hist) << '\n';
    for (const auto& [s, c] : hist) {
      const std::size_t bar = peak ? (c * 50 + peak - 1) / peak : 0;
      std::cout << "  " << s << '\t' << c << '\t' << std::string(bar, '#') << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PatternBoost: local search alternating with a small transformer"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;

  auto* seed = app.add_subcommand("seed", "build the seed pool, vocabulary and initial model");
  seed->add_option("config", config, "run config file")->required()->check(CLI::ExistingFile);
  seed->add_option("overrides", overrides, "key=value overrides");

  auto* run = app.add_subcommand("run", "seed, then run every generation");
  run->add_option("config", config, "run config file")->required()->check(CLI::ExistingFile);
  run->add_option("overrides", overrides, "key=value overrides");

  std::string checkpoint;
  auto* resume = app.add_subcommand("resume", "continue a run from its newest complete generation");
  resume->add_option("checkpoint", checkpoint, "run directory")->required()->check(CLI::ExistingDirectory);
  resume->add_option("overrides", overrides, "key=value overrides");

  std::string fixture_dir = PATTERNBOOST_FIXTURE_DIR;
  auto* verify = app.add_subcommand("verify", "check every shipped construction; exit 0 iff all pass");
  verify->add_option("--fixtures", fixture_dir, "fixture directory");

  std::string model_dir;
  std::size_t count = 0;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample", "draw constructions from a run's newest model");
  sample->add_option("model", model_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  sample->add_option("count", count, "number of samples")->required();
  sample->add_option("--seed", sample_seed, "sampling seed");

  std::string stats_csv;
  auto* histogram = app.add_subcommand("histogram", "summarise a stats.csv score histogram");
  histogram->add_option("stats", stats_csv, "stats.csv")->required()->check(CLI::ExistingFile);

  std::string problem_name;
  int size = 0;
  int k = 2;
  auto* oracle = app.add_subcommand("oracle", "exact optimum of a tiny instance by exhaustive search");
  oracle->add_option("problem", problem_name, "problem id")->required();
  oracle->add_option("size", size, "n, grid side, cube or box dimension")->required();
  oracle->add_option("-k", k, "chain bound or family count");

  CLI11_PARSE(app, argc, argv);
  install_logger();

  try {
    if (*seed) {
      auto cfg = load_config(config, overrides);
      auto st = loop::start_run(cfg);
      const auto& s = st.stats.front();
      std::cout << "pool " << s.pool_size << " best " << s.pool_best << " mean " << s.pool_mean << " mode "
                << loop::modal_score(s.histogram) << '\n';
      return 0;
    }
    if (*run) {
      auto st = loop::run(load_config(config, overrides));
      std::cout << "pool " << st.pool.size() << " best " << st.pool.best_score().value_or(0) << '\n';
      return 0;
    }
    if (*resume) {
      auto st = loop::resume(checkpoint, overrides);
      loop::continue_run(st);
      std::cout << "pool " << st.pool.size() << " best " << st.pool.best_score().value_or(0) << '\n';
      return 0;
    }
    if (*verify) return cmd_verify(fixture_dir);
    if (*sample) {
      auto st = loop::resume(model_dir);
      const auto report = loop::draw_samples(st, count, sample_seed);
      std::cerr << "drawn " << report.drawn << ", invalid " << report.invalid << '\n';
      for (const auto& c : report.constructions) std::cout << c.score << '\t' << digits(c.construction.payload) << '\n';
      return 0;
    }
    if (*histogram) return cmd_histogram(stats_csv);
    if (*oracle) {
      problems::ProblemParams p;
      p.n = size;
      p.k = k;
      std::cout << oracles::brute_best(problem_from_string(problem_name), p) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
