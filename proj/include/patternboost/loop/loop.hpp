#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "patternboost/core/pool.hpp"
#include "patternboost/loop/stats.hpp"
#include "patternboost/problems/problem.hpp"
#include "patternboost/tokenizer/codec.hpp"
#include "patternboost/transformer/model.hpp"

namespace pb::loop {

enum class SeedStart { empty, random };

struct RunConfig {
  ProblemId problem = ProblemId::triangle;
  problems::ProblemParams params;

  std::size_t pool_capacity = 10000;
  double selection_fraction = 0.25;
  std::size_t seed_runs = 40000;
  SeedStart seed_start = SeedStart::empty;
  /// False runs the global-only ablation: decoded samples enter the pool unsearched.
  bool local_search = true;

  int generations = 6;
  std::size_t samples = 100000;

  int layers = 2;
  int dim = 16;
  int heads = 4;
  transformer::AdamWConfig adam;
  std::size_t batch = 32;
  std::size_t initial_train_steps = 15000;
  std::size_t train_steps = 2000;

  tokenizer::CodecKind tokenizer = tokenizer::CodecKind::bpe;
  std::size_t bpe_vocab = 100;
  int fixed_width = 8;

  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path output_dir;  // empty: no checkpoints

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Everything a run carries between generations.
struct RunState {
  RunConfig cfg;
  std::unique_ptr<problems::Problem> problem;
  Pool pool{ProblemId::triangle, 0, 1};
  tokenizer::TokenCodec codec;
  transformer::Model<float> model;
  transformer::AdamW<float> opt;
  int generation = 0;
  std::vector<GenerationStats> stats;
};

/// Progress messages; defaults to stderr.
using Logger = std::function<void(const std::string&)>;
void set_logger(Logger log);

/// Runs cfg.seed_runs local searches from the problem's start and keeps the top
/// min(capacity, max(1, ceil(fraction * runs))) results. Fills `stats` when given.
Pool seed_database(const RunConfig& cfg, const problems::Problem& problem, GenerationStats* stats = nullptr);

/// Generation 0: seed pool, frozen codec and a fresh model. Writes the run directory
/// (config, vocab.txt, gen_0/, stats) when cfg.output_dir is set.
RunState start_run(const RunConfig& cfg);

/// Fine-tunes on the pool, samples, decodes, searches and merges; appends the stats and
/// checkpoints the generation.
const GenerationStats& run_generation(RunState& state);

/// start_run, then generations until cfg.generations.
RunState run(const RunConfig& cfg);

/// Loads the newest complete generation from a run directory. `overrides` are applied
/// to the stored config (e.g. a larger generations count).
RunState resume(const std::filesystem::path& dir, const std::vector<std::string>& overrides = {});

/// Runs the remaining generations of a started or resumed state.
void continue_run(RunState& state);

/// Decoded constructions sampled from a model, searched as in a generation.
struct SampleReport {
  std::size_t drawn = 0;
  std::size_t invalid = 0;
  std::vector<ScoredConstruction> constructions;
};
SampleReport draw_samples(const RunState& state, std::size_t count, std::uint64_t seed);

/// Maximum model sequence length for a codec trained on `corpus`.
int model_max_len(const problems::Problem& problem, const tokenizer::TokenCodec& codec,
                  const std::vector<std::vector<int>>& encoded_corpus);

}  // namespace pb::loop
