#include "patternboost/loop/loop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "patternboost/cli/config.hpp"
#include "patternboost/tokenizer/flatten.hpp"  // DecodeError
#include "patternboost/transformer/checkpoint.hpp"

namespace pb::loop {

namespace fs = std::filesystem;

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kSeedStream = 0x73656564;    // "seed"
constexpr std::uint64_t kTrainStream = 0x747261696e; // "train"
constexpr std::uint64_t kSampleStream = 0x73616d70;  // "samp"

constexpr std::size_t kLossWindow = 100;

std::mutex g_log_mutex;
Logger g_logger = [](const std::string& msg) { std::cerr << msg << '\n'; };

void log(const std::string& msg) {
  std::lock_guard lock(g_log_mutex);
  if (g_logger) g_logger(msg);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid run config: " + what);
}

/// Calls fn(i) for every i in [0, count) on `workers` threads. The first exception
/// thrown by any call is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    constexpr std::size_t kChunk = 16;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void fill_pool_stats(GenerationStats& s, const Pool& pool) {
  s.pool_size = pool.size();
  s.pool_best = pool.best_score().value_or(0);
  s.pool_mean = pool.mean_score();
}

std::vector<int> training_sequence(const tokenizer::TokenCodec& codec, const std::vector<int>& content) {
  std::vector<int> seq;
  seq.reserve(content.size() + 2);
  seq.push_back(codec.start_token());
  seq.insert(seq.end(), content.begin(), content.end());
  seq.push_back(codec.end_token());
  return seq;
}

fs::path gen_dir(const fs::path& root, int g) { return root / ("gen_" + std::to_string(g)); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

/// Writes gen_<k> under a temporary name and renames it into place, so a directory
/// named gen_<k> is always complete.
void checkpoint(const RunState& st) {
  const fs::path root = st.cfg.output_dir;
  if (root.empty()) return;
  const int g = st.generation;
  try {
    fs::create_directories(root);
    const fs::path final_dir = gen_dir(root, g);
    const fs::path tmp = root / ("gen_" + std::to_string(g) + ".partial");
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    st.pool.save(tmp / "pool.txt");
    transformer::save_checkpoint(tmp / "model.ckpt", st.model, st.opt);
    histogram_emit(st.stats, tmp / "stats.csv");
    summary_emit(st.stats, tmp / "summary.csv");
    fs::remove_all(final_dir);
    fs::rename(tmp, final_dir);
    fs::copy_file(final_dir / "stats.csv", root / "stats.csv", fs::copy_options::overwrite_existing);
    fs::copy_file(final_dir / "summary.csv", root / "summary.csv", fs::copy_options::overwrite_existing);
  } catch (const std::exception& e) {
    throw std::runtime_error("generation " + std::to_string(g) + ": checkpoint failed: " + e.what());
  }
}

std::vector<std::vector<int>> encode_pool(const RunState& st, std::size_t* skipped) {
  std::vector<std::vector<int>> data;
  const auto entries = st.pool.entries();
  data.reserve(entries.size());
  const auto max_len = static_cast<std::size_t>(st.model.config().max_len);
  std::size_t skip = 0;
  for (const auto& e : entries) {
    auto seq = training_sequence(st.codec, st.codec.encode(st.problem->to_base(e.construction.payload)));
    if (seq.size() > max_len) {
      ++skip;
      continue;
    }
    data.push_back(std::move(seq));
  }
  if (skipped) *skipped = skip;
  return data;
}

double train(RunState& st, std::size_t steps) {
  if (steps == 0) return 0.0;
  std::size_t skipped = 0;
  const auto data = encode_pool(st, &skipped);
  if (skipped) log("generation " + std::to_string(st.generation) + ": " + std::to_string(skipped) +
                   " pool entries longer than the model context were left out of training");
  if (data.empty()) throw std::runtime_error("no pool entry fits the model context");
  Rng rng = make_rng(st.cfg.seed, {kTrainStream, static_cast<std::uint64_t>(st.generation)});
  std::vector<std::vector<int>> batch(st.cfg.batch);
  double window_sum = 0;
  std::size_t window_n = 0;
  for (std::size_t step = 0; step < steps; ++step) {
    for (auto& ex : batch) ex = data[uniform_index(rng, data.size())];
    double loss = 0;
    try {
      loss = transformer::train_step(st.model, st.opt, batch);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("generation " + std::to_string(st.generation) + ", step " + std::to_string(step) + ": " +
                               e.what());
    }
    if (step + kLossWindow >= steps) {
      window_sum += loss;
      ++window_n;
    }
    if ((step + 1) % 1000 == 0)
      log("generation " + std::to_string(st.generation) + ": step " + std::to_string(step + 1) + "/" +
          std::to_string(steps) + " loss " + std::to_string(loss));
  }
  return window_n ? window_sum / static_cast<double>(window_n) : 0.0;
}

void insert_with_images(Pool& pool, const problems::Problem& problem, const Payload& p, Score s) {
  for (const auto& img : problem.augment(p)) pool.insert(img, s);
}

}  // namespace

void RunConfig::validate() const {
  require(pool_capacity > 0, "pool_capacity must be positive");
  require(selection_fraction > 0.0 && selection_fraction <= 1.0, "selection_fraction must lie in (0, 1]");
  require(seed_runs > 0, "seed_runs must be positive");
  require(generations >= 0, "generations must be non-negative");
  require(layers > 0, "layers must be positive");
  require(dim > 0, "dim must be positive");
  require(heads > 0, "heads must be positive");
  require(dim % heads == 0, "heads must divide dim");
  require(adam.lr > 0 && std::isfinite(adam.lr), "lr must be positive");
  require(adam.weight_decay >= 0, "weight_decay must be non-negative");
  require(adam.beta1 >= 0 && adam.beta1 < 1, "beta1 must lie in [0, 1)");
  require(adam.beta2 >= 0 && adam.beta2 < 1, "beta2 must lie in [0, 1)");
  require(adam.eps > 0, "eps must be positive");
  require(batch > 0, "batch must be positive");
  require(workers > 0, "workers must be positive");
  require(fixed_width >= 1 && fixed_width <= 16, "fixed_width must lie in [1, 16]");
  require(bpe_vocab <= tokenizer::kMaxBpeVocab, "bpe_vocab exceeds " + std::to_string(tokenizer::kMaxBpeVocab));
  problems::make_problem(problem, params);  // throws on bad sizes
}

void set_logger(Logger log) {
  std::lock_guard lock(g_log_mutex);
  g_logger = std::move(log);
}

Pool seed_database(const RunConfig& cfg, const problems::Problem& problem, GenerationStats* stats) {
  const std::size_t runs = cfg.seed_runs;
  std::vector<Payload> results(runs);
  std::vector<Score> scores(runs);
  parallel_for(runs, cfg.workers, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, {kSeedStream, i});
    Payload p = cfg.seed_start == SeedStart::random || !cfg.local_search ? problem.random_payload(rng)
                                                                            : problem.empty_start();
    if (cfg.local_search) p = problem.local_search(p, rng);
    scores[i] = problem.score(p);
    results[i] = std::move(p);
  });

  std::vector<std::size_t> order(runs);
  for (std::size_t i = 0; i < runs; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (results[a] != results[b]) return results[a] < results[b];
    return a < b;
  });

  GenerationStats s;
  s.generation = 0;
  s.samples = runs;
  s.valid = runs;
  s.local_searches = cfg.local_search ? runs : 0;
  std::set<Payload> distinct;
  for (std::size_t i = 0; i < runs; ++i) {
    if (scores[i] == kInvalidScore) continue;
    if (distinct.insert(results[i]).second) ++s.histogram[scores[i]];
  }

  const auto wanted = static_cast<std::size_t>(std::ceil(cfg.selection_fraction * static_cast<double>(runs)));
  const std::size_t keep = std::min(cfg.pool_capacity, std::max<std::size_t>(1, wanted));
  Pool pool(problem.id(), problem.payload_length(), cfg.pool_capacity);
  std::size_t taken = 0;
  for (std::size_t idx = 0; idx < runs && taken < keep; ++idx) {
    const std::size_t i = order[idx];
    if (scores[i] == kInvalidScore) continue;
    if (idx > 0 && results[i] == results[order[idx - 1]]) continue;
    insert_with_images(pool, problem, results[i], scores[i]);
    ++taken;
  }
  if (stats) {
    fill_pool_stats(s, pool);
    *stats = std::move(s);
  }
  return pool;
}

int model_max_len(const problems::Problem& problem, const tokenizer::TokenCodec& codec,
                  const std::vector<std::vector<int>>& encoded_corpus) {
  if (auto len = problem.base_length()) {
    std::size_t tokens = *len;  // BPE never lengthens a stream
    if (codec.kind() == tokenizer::CodecKind::fixed) tokens = codec.encode(std::vector<int>(*len, 0)).size();
    return static_cast<int>(tokens + 2);
  }
  std::size_t longest = 1;
  for (const auto& e : encoded_corpus) longest = std::max(longest, e.size());
  return static_cast<int>(2 * longest + 2);
}

RunState start_run(const RunConfig& cfg) {
  cfg.validate();
  RunState st;
  st.cfg = cfg;
  st.problem = problems::make_problem(cfg.problem, cfg.params);
  const auto& problem = *st.problem;

  log("seeding " + std::string(to_string(cfg.problem)) + " with " + std::to_string(cfg.seed_runs) + " runs");
  GenerationStats s0;
  st.pool = seed_database(cfg, problem, &s0);
  log("seed pool: " + std::to_string(st.pool.size()) + " entries, best " + std::to_string(s0.pool_best));

  std::vector<std::vector<int>> corpus;
  for (const auto& e : st.pool.entries()) corpus.push_back(problem.to_base(e.construction.payload));
  switch (cfg.tokenizer) {
    case tokenizer::CodecKind::identity:
      st.codec = tokenizer::TokenCodec::identity(problem.base_labels());
      break;
    case tokenizer::CodecKind::fixed: {
      const auto len = problem.base_length();
      if (!len) throw std::invalid_argument("fixed-width tokens need streams of a fixed length");
      st.codec = tokenizer::TokenCodec::fixed(problem.base_labels(), cfg.fixed_width, *len);
      break;
    }
    case tokenizer::CodecKind::bpe:
      st.codec = tokenizer::TokenCodec::bpe(tokenizer::bpe_train(corpus, problem.base_labels(), cfg.bpe_vocab));
      break;
  }
  std::vector<std::vector<int>> encoded;
  encoded.reserve(corpus.size());
  for (const auto& b : corpus) encoded.push_back(st.codec.encode(b));

  transformer::ModelConfig mc;
  mc.n_layers = cfg.layers;
  mc.dim = cfg.dim;
  mc.n_heads = cfg.heads;
  mc.vocab = static_cast<int>(st.codec.model_vocab());
  mc.max_len = model_max_len(problem, st.codec, encoded);
  mc.seed = cfg.seed;
  st.model = transformer::Model<float>(mc);
  st.opt = transformer::AdamW<float>(cfg.adam, st.model.size());
  st.generation = 0;
  st.stats.push_back(std::move(s0));

  if (!cfg.output_dir.empty()) {
    try {
      fs::create_directories(cfg.output_dir);
      write_text(cfg.output_dir / "config", cli::echo_config(cfg));
      st.codec.save(cfg.output_dir / "vocab.txt");
    } catch (const std::exception& e) {
      throw std::runtime_error("generation 0: cannot write run directory: " + std::string(e.what()));
    }
    checkpoint(st);
  }
  return st;
}

SampleReport draw_samples(const RunState& st, std::size_t count, std::uint64_t seed) {
  struct Slot {
    bool ok = false;
    Payload payload;
    Score score = 0;
  };
  std::vector<Slot> slots(count);
  const auto& problem = *st.problem;
  parallel_for(count, st.cfg.workers, [&](std::size_t i) {
    Rng rng = make_rng(seed, {i});
    auto smp = transformer::sample(st.model, rng, st.codec.start_token(), st.codec.end_token());
    if (!smp.ended) return;
    std::vector<int> base;
    try {
      base = st.codec.decode(smp.tokens);
    } catch (const tokenizer::DecodeError&) {
      return;
    }
    auto p = problem.from_sample(base, rng, st.cfg.local_search);
    if (!p) return;
    const Score s = problem.score(*p);
    if (s == kInvalidScore) return;
    slots[i] = Slot{true, std::move(*p), s};
  });
  SampleReport r;
  r.drawn = count;
  for (auto& s : slots) {
    if (!s.ok) {
      ++r.invalid;
      continue;
    }
    r.constructions.push_back(ScoredConstruction{Construction{problem.id(), std::move(s.payload)}, s.score});
  }
  return r;
}

const GenerationStats& run_generation(RunState& st) {
  if (st.pool.empty()) throw std::logic_error("run_generation needs a nonempty pool");
  const int g = st.generation + 1;
  RunState& s = st;
  // Train under the new generation index so the batch stream is tied to it, but leave
  // state.generation untouched until the generation succeeds.
  const int prev = s.generation;
  s.generation = g;
  GenerationStats gs;
  gs.generation = g;
  try {
    const std::size_t steps = g == 1 ? s.cfg.initial_train_steps : s.cfg.train_steps;
    log("generation " + std::to_string(g) + ": training " + std::to_string(steps) + " steps");
    gs.train_loss = train(s, steps);

    log("generation " + std::to_string(g) + ": sampling " + std::to_string(s.cfg.samples));
    auto report = draw_samples(s, s.cfg.samples, derive_seed(s.cfg.seed, {kSampleStream, static_cast<std::uint64_t>(g)}));
    gs.samples = report.drawn;
    gs.invalid = report.invalid;
    gs.valid = report.drawn - report.invalid;
    const std::size_t prior = s.stats.empty() ? 0 : s.stats.back().local_searches;
    gs.local_searches = prior + (s.cfg.local_search ? gs.valid : 0);

    std::set<Payload> distinct;
    for (const auto& c : report.constructions) {
      if (distinct.insert(c.construction.payload).second) ++gs.histogram[c.score];
      insert_with_images(s.pool, *s.problem, c.construction.payload, c.score);
    }
  } catch (...) {
    s.generation = prev;
    throw;
  }
  fill_pool_stats(gs, s.pool);
  s.stats.push_back(std::move(gs));
  log("generation " + std::to_string(g) + ": valid " + std::to_string(s.stats.back().valid) + "/" +
      std::to_string(s.stats.back().samples) + ", pool best " + std::to_string(s.stats.back().pool_best));
  checkpoint(s);
  return s.stats.back();
}

void continue_run(RunState& st) {
  while (st.generation < st.cfg.generations) run_generation(st);
}

RunState run(const RunConfig& cfg) {
  RunState st = start_run(cfg);
  continue_run(st);
  return st;
}

RunState resume(const fs::path& dir, const std::vector<std::string>& overrides) {
  const fs::path config_path = dir / "config";
  RunConfig stored = cli::parse_config(config_path);
  std::vector<std::string> all{"output_dir=" + dir.string()};
  all.insert(all.end(), overrides.begin(), overrides.end());
  RunConfig cfg = cli::parse_config(config_path, all);
  auto same_shape = [](RunConfig a, const RunConfig& b) {
    a.generations = b.generations;
    a.samples = b.samples;
    a.workers = b.workers;
    a.train_steps = b.train_steps;
    a.output_dir = b.output_dir;
    a.adam = b.adam;
    a.batch = b.batch;
    return a == b;
  };
  if (!same_shape(stored, cfg))
    throw std::invalid_argument("resume overrides may only change generations, samples, workers, train_steps, "
                                "output_dir, batch and optimizer settings");

  int newest = -1;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_directory() || name.rfind("gen_", 0) != 0) continue;
    const std::string digits = name.substr(4);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      continue;
    const fs::path d = entry.path();
    if (!fs::exists(d / "pool.txt") || !fs::exists(d / "model.ckpt") || !fs::exists(d / "stats.csv") ||
        !fs::exists(d / "summary.csv"))
      continue;
    newest = std::max(newest, std::stoi(digits));
  }
  if (newest < 0) throw std::runtime_error(dir.string() + ": no complete generation to resume from");

  RunState st;
  st.cfg = cfg;
  st.problem = problems::make_problem(cfg.problem, cfg.params);
  const fs::path gd = gen_dir(dir, newest);
  st.pool = Pool::load(gd / "pool.txt", cfg.pool_capacity);
  if (st.pool.problem() != cfg.problem || st.pool.payload_length() != st.problem->payload_length())
    throw std::runtime_error(gd.string() + ": pool does not match the run config");
  st.codec = tokenizer::TokenCodec::load(dir / "vocab.txt");
  transformer::load_checkpoint(gd / "model.ckpt", st.model, st.opt);
  if (static_cast<std::size_t>(st.model.config().vocab) != st.codec.model_vocab())
    throw std::runtime_error(gd.string() + ": model vocabulary does not match vocab.txt");
  st.opt.cfg = cfg.adam;
  st.stats = read_stats(gd / "stats.csv", gd / "summary.csv");
  if (st.stats.empty() || st.stats.back().generation != newest)
    throw std::runtime_error(gd.string() + ": statistics do not end at generation " + std::to_string(newest));
  st.generation = newest;
  write_text(dir / "config", cli::echo_config(cfg));
  fs::copy_file(gd / "stats.csv", dir / "stats.csv", fs::copy_options::overwrite_existing);
  fs::copy_file(gd / "summary.csv", dir / "summary.csv", fs::copy_options::overwrite_existing);
  log("resumed " + dir.string() + " at generation " + std::to_string(newest));
  return st;
}

}  // namespace pb::loop
