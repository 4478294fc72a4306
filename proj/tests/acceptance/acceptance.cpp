// Acceptance gate: one PASS/FAIL line per criterion, with every tolerance pinned below.
//
//   acceptance [--only 1,2,3] [--verbose]
//
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "patternboost/core/rng.hpp"
#include "patternboost/loop/loop.hpp"
#include "patternboost/oracles/counts.hpp"
#include "patternboost/oracles/fixtures.hpp"
#include "patternboost/problems/c4.hpp"
#include "patternboost/problems/pattern312.hpp"
#include "patternboost/problems/permanent.hpp"
#include "patternboost/problems/triangle.hpp"
#include "patternboost/tokenizer/bpe.hpp"
#include "patternboost/transformer/checkpoint.hpp"
#include "patternboost/transformer/model.hpp"

namespace fs = std::filesystem;
using namespace pb;

namespace {

// Pinned limits.
constexpr double kFixtureSeconds = 60;
constexpr double kOracleSeconds = 120;
constexpr double kNumericsSeconds = 60;
constexpr double kCountSeconds = 300;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradAbsFloor = 1e-9;  // both sides of a vanishing gradient
constexpr double kFdStep = 1e-3;
constexpr double kSoftmaxTol = 1e-6;
constexpr int kMantelPeak = 66;
constexpr int kMantelPeakSlack = 2;
constexpr Score kMantelSeedBest = 96;
constexpr Score kMantelTarget = 100;
constexpr int kMantelRunsNeeded = 2;
constexpr std::uint64_t kCospherical4Floor = 700000;
constexpr std::uint64_t kChoose64_5 = 7624512;

// Desk-scale Mantel setup shared by criteria 5 and 6.
constexpr std::uint64_t kMantelSeeds[] = {1, 2, 3};
constexpr std::size_t kMantelInitialSteps = 4000;
constexpr std::size_t kMantelSteps = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 --------------------------------------------------------------------------

Outcome fixture_verification() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fixtures = oracles::load_fixture_dir(PATTERNBOOST_FIXTURE_DIR);
  const std::set<std::string> wanted = {
      "cube6_diameter6_81",       "sperner_saturated_108",    "cross_sperner_tuples_7_3",
      "cross_sperner_tuples_8_3", "cross_sperner_tuples_6_4", "cross_sperner_tuples_7_4",
      "box_double_cover_41",      "sphere_no5_sets_n3",       "sphere_no5_sets_n4",
      "sphere_no5_sets_n5",       "sphere_no5_sets_n6",       "sphere_no5_sets_n7",
      "sphere_no5_sets_n8",       "sphere_no5_sets_n9",       "sphere_no5_sets_n10"};
  std::set<std::string> seen;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  for (const auto& f : fixtures) {
    if (!wanted.contains(f.name)) continue;
    seen.insert(f.name);
    const auto report = oracles::verify_fixture(f);
    for (const auto& a : report.assertions) {
      ++checks;
      if (!a.pass) failures.push_back(f.name + " " + a.name + (a.detail.empty() ? "" : " (" + a.detail + ")"));
    }
  }
  for (const auto& w : wanted)
    if (!seen.contains(w)) failures.push_back(w + " missing");
  const double secs = seconds_since(t0);
  if (secs >= kFixtureSeconds) failures.push_back("runtime " + fmt("%.1fs", secs));

  Outcome o;
  o.pass = failures.empty();
  o.detail = std::to_string(seen.size()) + " fixtures, " + std::to_string(checks) + " exact checks, " +
             fmt("%.1fs", secs);
  for (const auto& f : failures) o.detail += "; " + f;
  return o;
}

// 2 --------------------------------------------------------------------------

Outcome bpe_golden() {
  const std::vector<std::string> strings = {"100001", "110001", "001001"};
  std::vector<std::vector<int>> corpus;
  for (const auto& s : strings) {
    std::vector<int> v;
    for (char c : s) v.push_back(c - '0');
    corpus.push_back(v);
  }
  const auto vocab = tokenizer::bpe_train(corpus, {"0", "1"}, 4);
  std::vector<std::string> merges;
  for (std::size_t i = 0; i < vocab.merges().size(); ++i) {
    const auto [l, r] = vocab.merges()[i];
    merges.push_back(std::to_string(l) + std::to_string(r));
  }
  std::vector<std::string> encoded;
  std::size_t total = 0;
  bool roundtrip = true;
  for (const auto& s : corpus) {
    const auto t = tokenizer::bpe_encode(vocab, s);
    std::string e;
    for (int x : t) e += std::to_string(x);
    encoded.push_back(e);
    total += t.size();
    roundtrip = roundtrip && tokenizer::bpe_decode(vocab, t) == s;
  }
  // mean length 10/3, printed to two decimals
  const bool mean_ok = total == 10 && fmt("%.2f", static_cast<double>(total) / 3) == "3.33";
  Outcome o;
  o.pass = merges == std::vector<std::string>{"00", "12"} &&
           encoded == std::vector<std::string>{"321", "1301", "231"} && mean_ok && roundtrip;
  std::string m, e;
  for (const auto& x : merges) m += (m.empty() ? "" : " ") + x;
  for (const auto& x : encoded) e += (e.empty() ? "" : " ") + x;
  o.detail = "merges [" + m + "], encoded [" + e + "], mean " + fmt("%.2f", static_cast<double>(total) / 3);
  return o;
}

// 3 --------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng = make_rng(2024, {3});
  std::size_t perm_bad = 0, pattern_bad = 0, graph_bad = 0;

  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 6));
    const double density = std::uniform_real_distribution<double>(0, 1)(rng);
    auto m = problems::BinaryMatrix::zeros(n);
    for (auto& x : m.a) x = std::bernoulli_distribution(density)(rng) ? 1 : 0;
    if (problems::permanent(m) != problems::BigInt(oracles::permanent_naive(m))) ++perm_bad;
  }

  for (unsigned mask = 0; mask < 512; ++mask) {
    auto m = problems::BinaryMatrix::zeros(3);
    for (int i = 0; i < 9; ++i) m.a[static_cast<std::size_t>(i)] = mask >> i & 1U;
    if (problems::contains_312(m) != oracles::contains_312_naive(m)) ++pattern_bad;
  }

  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 8));
    const double density = std::uniform_real_distribution<double>(0, 1)(rng);
    auto g = problems::GraphBits::empty(n);
    for (auto& b : g.bits) b = std::bernoulli_distribution(density)(rng) ? 1 : 0;
    const auto tri = oracles::count_triangles_naive(g);
    const auto c4 = oracles::count_c4_naive(g);
    const auto s = oracles::count_structures(g);
    if (problems::count_triangles(g) != tri || problems::count_c4(g) != c4 || s.triangles != tri ||
        s.four_cycles != c4)
      ++graph_bad;
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = perm_bad == 0 && pattern_bad == 0 && graph_bad == 0 && secs < kOracleSeconds;
  o.detail = "permanent mismatches " + std::to_string(perm_bad) + "/1000, 312 mismatches " +
             std::to_string(pattern_bad) + "/512, graph count mismatches " + std::to_string(graph_bad) + "/500, " +
             fmt("%.1fs", secs);
  return o;
}

// 4 --------------------------------------------------------------------------

std::vector<int> random_tokens(Rng& rng, const transformer::ModelConfig& c, std::size_t len) {
  std::vector<int> t{c.vocab - 2};  // START
  while (t.size() < len) t.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(c.vocab - 2))));
  return t;
}

Outcome transformer_numerics() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> failures;

  // Gradient check: 1 layer, d = 8, double precision, 100 random parameters.
  transformer::ModelConfig gc{1, 8, 2, 7, 12, 99};
  transformer::Model<double> gm(gc);
  Rng rng = make_rng(2024, {4});
  for (auto& p : gm.params()) p += std::normal_distribution<double>(0, 0.3)(rng);  // off the init symmetry
  const auto seq = random_tokens(rng, gc, 12);
  std::vector<double> grad(gm.size(), 0.0);
  gm.backward(seq, grad);
  double worst = 0;
  std::size_t grad_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t i = uniform_index(rng, gm.size());
    const double keep = gm.params()[i];
    auto loss_at = [&](double x) {
      gm.params()[i] = x;
      return gm.loss(seq);
    };
    // Five-point central stencil: truncation error O(h^4) instead of O(h^2).
    const double h = kFdStep;
    const double fd = (8 * (loss_at(keep + h) - loss_at(keep - h)) - (loss_at(keep + 2 * h) - loss_at(keep - 2 * h))) / (12 * h);
    gm.params()[i] = keep;
    const double diff = std::abs(fd - grad[i]);
    const double rel = diff / std::max({std::abs(fd), std::abs(grad[i]), 1e-300});
    if (diff > kGradAbsFloor) worst = std::max(worst, rel);
    if (diff > kGradAbsFloor && rel > kGradRelTol) ++grad_bad;
  }
  if (grad_bad) failures.push_back(std::to_string(grad_bad) + " gradients off");

  // Softmax rows and causality on the loop's model shape.
  transformer::ModelConfig mc{2, 16, 4, 12, 40, 7};
  transformer::Model<float> m(mc);
  Rng prng = make_rng(2024, {5});
  for (auto& p : m.params()) p += std::normal_distribution<float>(0, 0.1f)(prng);
  const auto toks = random_tokens(prng, mc, 40);
  const auto probs = m.probabilities(toks);
  double worst_row = 0;
  for (std::size_t r = 0; r < toks.size(); ++r) {
    double s = 0;
    for (int v = 0; v < mc.vocab; ++v) s += probs[r * static_cast<std::size_t>(mc.vocab) + static_cast<std::size_t>(v)];
    worst_row = std::max(worst_row, std::abs(s - 1.0));
  }
  if (worst_row > kSoftmaxTol) failures.push_back("softmax row off by " + fmt("%.3g", worst_row));

  const auto base_logits = m.logits(toks);
  std::size_t leaks = 0;
  for (std::size_t j = 1; j < toks.size(); ++j) {
    auto changed = toks;
    changed[j] = (changed[j] + 1) % (mc.vocab - 2);
    const auto l = m.logits(changed);
    const auto prefix = j * static_cast<std::size_t>(mc.vocab);
    if (!std::equal(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(prefix), base_logits.begin())) ++leaks;
  }
  if (leaks) failures.push_back(std::to_string(leaks) + " positions see the future");

  // Replay: identical seeds give bitwise-identical training and samples.
  auto replay = [&] {
    transformer::Model<float> r(mc);
    transformer::AdamW<float> opt({}, r.size());
    Rng data = make_rng(2024, {6});
    for (int step = 0; step < 20; ++step) {
      std::vector<std::vector<int>> batch;
      for (int b = 0; b < 4; ++b) {
        auto t = random_tokens(data, mc, 5 + uniform_index(data, 20));
        t.push_back(mc.vocab - 1);
        batch.push_back(t);
      }
      transformer::train_step(r, opt, batch);
    }
    Rng srng = make_rng(2024, {7});
    std::vector<std::vector<int>> samples;
    for (int s = 0; s < 20; ++s) samples.push_back(transformer::sample(r, srng, mc.vocab - 2, mc.vocab - 1).tokens);
    return std::make_pair(r.params(), samples);
  };
  if (replay() != replay()) failures.push_back("replay differs");

  const double secs = seconds_since(t0);
  if (secs >= kNumericsSeconds) failures.push_back("runtime " + fmt("%.1fs", secs));
  Outcome o;
  o.pass = failures.empty();
  o.detail = "worst gradient rel err " + fmt("%.2e", worst) + ", worst softmax row " + fmt("%.2e", worst_row) +
             ", causal leaks " + std::to_string(leaks) + ", " + fmt("%.1fs", secs);
  for (const auto& f : failures) o.detail += "; " + f;
  return o;
}

// 5 and 6 --------------------------------------------------------------------

loop::RunConfig mantel_config(std::uint64_t seed, int workers) {
  loop::RunConfig c;
  c.problem = ProblemId::triangle;
  c.params.n = 20;
  c.layers = 2;
  c.dim = 16;
  c.heads = 4;
  c.seed_runs = 40000;
  c.bpe_vocab = 100;
  c.tokenizer = tokenizer::CodecKind::bpe;
  c.generations = 6;
  c.samples = 20000;
  c.initial_train_steps = kMantelInitialSteps;
  c.train_steps = kMantelSteps;
  c.seed = seed;
  c.workers = workers;
  return c;
}

struct MantelRun {
  Score seed_peak = 0;
  Score seed_best = 0;
  Score best = 0;
  int generation_hit = -1;
  std::size_t local_searches = 0;
};

std::map<std::uint64_t, MantelRun> g_mantel;

const MantelRun& mantel_run(std::uint64_t seed, int workers) {
  if (auto it = g_mantel.find(seed); it != g_mantel.end()) return it->second;
  const auto st = loop::run(mantel_config(seed, workers));
  MantelRun r;
  r.seed_peak = loop::modal_score(st.stats.front().histogram);
  r.seed_best = st.stats.front().pool_best;
  r.best = st.stats.back().pool_best;
  r.local_searches = st.stats.back().local_searches;
  for (const auto& s : st.stats)
    if (s.pool_best >= kMantelTarget) {
      r.generation_hit = s.generation;
      break;
    }
  return g_mantel[seed] = r;
}

Outcome mantel(int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  int hits = 0;
  bool seeds_ok = true;
  std::string detail;
  for (auto seed : kMantelSeeds) {
    const auto& r = mantel_run(seed, workers);
    const bool peak_ok = std::abs(r.seed_peak - kMantelPeak) <= kMantelPeakSlack;
    seeds_ok = seeds_ok && peak_ok && r.seed_best >= kMantelSeedBest;
    if (r.best >= kMantelTarget) ++hits;
    detail += "seed " + std::to_string(seed) + ": peak " + std::to_string(r.seed_peak) + ", seed best " +
              std::to_string(r.seed_best) + ", best " + std::to_string(r.best) +
              (r.generation_hit >= 0 ? " at gen " + std::to_string(r.generation_hit) : "") + "; ";
  }
  Outcome o;
  o.pass = seeds_ok && hits >= kMantelRunsNeeded;
  o.detail = detail + std::to_string(hits) + "/3 runs reach 100, " + fmt("%.0fs", seconds_since(t0));
  return o;
}

Outcome ablation(int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& pb_run = mantel_run(kMantelSeeds[0], workers);

  auto global = mantel_config(kMantelSeeds[0], workers);
  global.local_search = false;
  const auto gst = loop::run(global);
  const Score global_best = gst.stats.back().pool_best;

  // Local search alone, spending every search the full run made.
  auto local = mantel_config(kMantelSeeds[0], workers);
  local.seed_runs = pb_run.local_searches;
  loop::GenerationStats ls;
  const auto problem = problems::make_problem(local.problem, local.params);
  loop::seed_database(local, *problem, &ls);
  const Score local_mode = loop::modal_score(ls.histogram);

  Outcome o;
  o.pass = pb_run.best > global_best && pb_run.best > local_mode;
  o.detail = "PatternBoost best " + std::to_string(pb_run.best) + ", global-only best " + std::to_string(global_best) +
             ", local-only mode " + std::to_string(local_mode) + " over " + std::to_string(pb_run.local_searches) +
             " searches, " + fmt("%.0fs", seconds_since(t0));
  return o;
}

// 7 --------------------------------------------------------------------------

loop::RunConfig substitute_config(ProblemId id, const fs::path& dir, int workers) {
  loop::RunConfig c;
  c.problem = id;
  switch (id) {
    case ProblemId::c4:
      c.params.n = 20;
      break;
    case ProblemId::permanent312:
      c.params.n = 12;
      c.tokenizer = tokenizer::CodecKind::fixed;
      break;
    case ProblemId::isosceles:
      c.params.n = 16;
      c.tokenizer = tokenizer::CodecKind::fixed;
      break;
    case ProblemId::sperner:
      c.params.n = 8;
      c.params.k = 3;
      break;
    default:
      break;
  }
  c.seed_runs = 2000;
  c.pool_capacity = 500;
  c.selection_fraction = 0.25;
  c.generations = 3;
  c.samples = 1000;
  c.initial_train_steps = 300;
  c.train_steps = 100;
  c.bpe_vocab = 64;
  c.seed = 11;
  c.workers = workers;
  c.output_dir = dir;
  return c;
}

Outcome substitute_properties(int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / ("pb_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::string> failures;
  std::string detail;
  for (ProblemId id : {ProblemId::c4, ProblemId::permanent312, ProblemId::isosceles, ProblemId::sperner}) {
    const std::string name(to_string(id));
    auto full = substitute_config(id, root / (name + "_full"), workers);
    auto st = loop::start_run(full);
    bool valid = true, monotone = true;
    auto check_pool = [&](const loop::RunState& s) {
      for (const auto& e : s.pool.entries()) valid = valid && s.problem->is_valid(e.construction.payload);
    };
    check_pool(st);
    while (st.generation < full.generations) {
      const Score before = st.stats.back().pool_best;
      loop::run_generation(st);
      check_pool(st);
      monotone = monotone && st.stats.back().pool_best >= before;
    }

    auto part = substitute_config(id, root / (name + "_split"), workers);
    part.generations = 1;
    loop::run(part);
    auto resumed = loop::resume(part.output_dir, {"generations=3"});
    loop::continue_run(resumed);
    const bool identical = resumed.pool == st.pool && resumed.stats == st.stats &&
                           resumed.model == st.model && resumed.opt == st.opt;

    if (!valid) failures.push_back(name + " pool holds an invalid entry");
    if (!monotone) failures.push_back(name + " best score decreased");
    if (!identical) failures.push_back(name + " resumed run differs");
    detail += name + " n=" + std::to_string(full.params.n) + " best " + std::to_string(st.stats.front().pool_best) +
              "->" + std::to_string(st.stats.back().pool_best) + "; ";
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = failures.empty();
  o.detail = detail + "3 generations x 1000 samples, " + fmt("%.0fs", seconds_since(t0));
  for (const auto& f : failures) o.detail += "; " + f;
  return o;
}

// 8 --------------------------------------------------------------------------

Outcome structure_counting(int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = oracles::count_cospherical(4, workers);
  const double secs = seconds_since(t0);
  // One determinant per 5-subset, outside the timed count.
  const auto naive = oracles::count_cospherical_naive(4);
  Outcome o;
  o.pass = c.degenerate > kCospherical4Floor && c.total == kChoose64_5 && secs < kCountSeconds &&
           naive.degenerate == c.degenerate && naive.total == c.total;
  o.detail = std::to_string(c.degenerate) + " of " + std::to_string(c.total) + " 5-subsets of [4]^3 on a sphere or plane (naive " +
             std::to_string(naive.degenerate) + "), " + std::to_string(workers) + " workers, " + fmt("%.1fs", secs);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool verbose = false;
  int workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 8));
  app.add_option("--workers", workers, "threads for the loop and the counts")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "print loop progress");
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7, 8};
  std::sort(only.begin(), only.end());
  if (!verbose) loop::set_logger({});

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"published constructions", fixture_verification}},
      {2, {"BPE golden corpus", bpe_golden}},
      {3, {"oracle equivalence", oracle_equivalence}},
      {4, {"transformer numerics", transformer_numerics}},
      {5, {"desk-scale Mantel reproduction", [&] { return mantel(workers); }}},
      {6, {"ablation", [&] { return ablation(workers); }}},
      {7, {"substitute properties", [&] { return substitute_properties(workers); }}},
      {8, {"structure counting", [&] { return structure_counting(workers); }}},
  };

  bool all = true;
  for (int id : only) {
    const auto& [name, fn] = criteria.at(id);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
