#include "patternboost/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pb::cli {

using loop::RunConfig;

loop::RunConfig default_config(ProblemId id) {
  RunConfig c;
  c.problem = id;
  switch (id) {
    case ProblemId::triangle:
      c.params.n = 20;
      break;
    case ProblemId::c4:
      c.params.n = 33;
      c.pool_capacity = 50000;
      c.selection_fraction = 0.5;
      c.seed_runs = 100000;
      c.samples = 500000;
      c.generations = 10;
      break;
    case ProblemId::permanent312:
      c.params.n = 25;
      c.seed_runs = 30000;
      c.pool_capacity = 7500;
      c.samples = 30000;
      c.tokenizer = tokenizer::CodecKind::fixed;
      break;
    case ProblemId::cube:
      c.params.n = 6;
      c.seed_runs = 20000;
      c.pool_capacity = 5000;
      c.samples = 20000;
      c.tokenizer = tokenizer::CodecKind::fixed;
      break;
    case ProblemId::isosceles:
      c.params.n = 16;
      c.seed_runs = 20000;
      c.pool_capacity = 5000;
      c.samples = 20000;
      c.tokenizer = tokenizer::CodecKind::fixed;
      break;
    case ProblemId::sphere:
      c.params.n = 6;
      c.seed_runs = 10000;
      c.selection_fraction = 0.10;
      c.pool_capacity = 1000;
      c.samples = 10000;
      c.tokenizer = tokenizer::CodecKind::identity;
      break;
    case ProblemId::sperner:
      c.params.n = 8;
      c.params.k = 3;
      c.seed_runs = 20000;
      c.pool_capacity = 5000;
      c.samples = 20000;
      break;
    case ProblemId::cross_sperner:
      c.params.n = 7;
      c.params.k = 3;
      c.seed_runs = 20000;
      c.pool_capacity = 5000;
      c.samples = 20000;
      c.tokenizer = tokenizer::CodecKind::identity;
      break;
    case ProblemId::box_cover:
      c.params.n = 3;
      c.seed_runs = 20000;
      c.pool_capacity = 5000;
      c.samples = 20000;
      c.tokenizer = tokenizer::CodecKind::identity;
      break;
  }
  return c;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) { throw std::invalid_argument(where + ": " + msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long to_int(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(where, "'" + v + "' is not an integer");
  }
  if (used != v.size()) bad(where, "'" + v + "' is not an integer");
  return x;
}

unsigned long long to_uint(const std::string& v, const std::string& where) {
  if (!v.empty() && v[0] == '-') bad(where, "'" + v + "' must be non-negative");
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    bad(where, "'" + v + "' is not an unsigned integer");
  }
  if (used != v.size()) bad(where, "'" + v + "' is not an unsigned integer");
  return x;
}

double to_real(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(where, "'" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(x)) bad(where, "'" + v + "' is not a number");
  return x;
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(where, "'" + v + "' is not a boolean");
}

int to_small(const std::string& v, const std::string& where) {
  const long long x = to_int(v, where);
  if (x < -1000000000LL || x > 1000000000LL) bad(where, "'" + v + "' is out of range");
  return static_cast<int>(x);
}

std::string real_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const std::string& v, const std::string& w) { c.seed = to_uint(v, w); }},
      {"workers", [](RunConfig& c, const std::string& v, const std::string& w) { c.workers = to_small(v, w); }},
      {"generations", [](RunConfig& c, const std::string& v, const std::string& w) { c.generations = to_small(v, w); }},
      {"output_dir", [](RunConfig& c, const std::string& v, const std::string&) { c.output_dir = v; }},
      {"n", [](RunConfig& c, const std::string& v, const std::string& w) { c.params.n = to_small(v, w); }},
      {"k", [](RunConfig& c, const std::string& v, const std::string& w) { c.params.k = to_small(v, w); }},
      {"delimiters", [](RunConfig& c, const std::string& v, const std::string& w) { c.params.delimiters = to_bool(v, w); }},
      {"include_diagonal",
       [](RunConfig& c, const std::string& v, const std::string& w) { c.params.include_diagonal = to_bool(v, w); }},
      {"max_boxes", [](RunConfig& c, const std::string& v, const std::string& w) { c.params.max_boxes = to_small(v, w); }},
      {"over_weight", [](RunConfig& c, const std::string& v, const std::string& w) { c.params.over_weight = to_small(v, w); }},
      {"under_weight",
       [](RunConfig& c, const std::string& v, const std::string& w) { c.params.under_weight = to_small(v, w); }},
      {"pool_capacity", [](RunConfig& c, const std::string& v, const std::string& w) { c.pool_capacity = to_uint(v, w); }},
      {"selection_fraction",
       [](RunConfig& c, const std::string& v, const std::string& w) { c.selection_fraction = to_real(v, w); }},
      {"seed_runs", [](RunConfig& c, const std::string& v, const std::string& w) { c.seed_runs = to_uint(v, w); }},
      {"seed_start",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v == "empty") c.seed_start = loop::SeedStart::empty;
         else if (v == "random") c.seed_start = loop::SeedStart::random;
         else bad(w, "seed_start must be empty or random");
       }},
      {"local_search", [](RunConfig& c, const std::string& v, const std::string& w) { c.local_search = to_bool(v, w); }},
      {"samples", [](RunConfig& c, const std::string& v, const std::string& w) { c.samples = to_uint(v, w); }},
      {"layers", [](RunConfig& c, const std::string& v, const std::string& w) { c.layers = to_small(v, w); }},
      {"dim", [](RunConfig& c, const std::string& v, const std::string& w) { c.dim = to_small(v, w); }},
      {"heads", [](RunConfig& c, const std::string& v, const std::string& w) { c.heads = to_small(v, w); }},
      {"lr", [](RunConfig& c, const std::string& v, const std::string& w) { c.adam.lr = to_real(v, w); }},
      {"weight_decay", [](RunConfig& c, const std::string& v, const std::string& w) { c.adam.weight_decay = to_real(v, w); }},
      {"beta1", [](RunConfig& c, const std::string& v, const std::string& w) { c.adam.beta1 = to_real(v, w); }},
      {"beta2", [](RunConfig& c, const std::string& v, const std::string& w) { c.adam.beta2 = to_real(v, w); }},
      {"eps", [](RunConfig& c, const std::string& v, const std::string& w) { c.adam.eps = to_real(v, w); }},
      {"batch", [](RunConfig& c, const std::string& v, const std::string& w) { c.batch = to_uint(v, w); }},
      {"initial_train_steps",
       [](RunConfig& c, const std::string& v, const std::string& w) { c.initial_train_steps = to_uint(v, w); }},
      {"train_steps", [](RunConfig& c, const std::string& v, const std::string& w) { c.train_steps = to_uint(v, w); }},
      {"tokenizer",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         try {
           c.tokenizer = tokenizer::codec_from_string(v);
         } catch (const std::invalid_argument& e) {
           bad(w, e.what());
         }
       }},
      {"bpe_vocab", [](RunConfig& c, const std::string& v, const std::string& w) { c.bpe_vocab = to_uint(v, w); }},
      {"fixed_width", [](RunConfig& c, const std::string& v, const std::string& w) { c.fixed_width = to_small(v, w); }},
  };
  return table;
}

const char* const kSections[] = {"run", "problem", "pool", "sampling", "model", "train", "tokenizer"};

struct Entry {
  std::string key, value, where;
};

void split_assignment(const std::string& line, const std::string& where, std::vector<Entry>& out) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) bad(where, "expected key = value, got '" + line + "'");
  Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where};
  if (e.key.empty()) bad(where, "missing key");
  out.push_back(std::move(e));
}

}  // namespace

loop::RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                                  const std::string& source) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(where, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const char* s : kSections) known = known || name == s;
      if (!known) bad(where, "unknown section [" + name + "]");
      continue;
    }
    split_assignment(line, where, entries);
  }
  for (std::size_t i = 0; i < overrides.size(); ++i)
    split_assignment(overrides[i], "override '" + overrides[i] + "'", entries);

  const Entry* problem = nullptr;
  for (const auto& e : entries)
    if (e.key == "problem") problem = &e;
  if (!problem) throw std::invalid_argument(source + ": missing required key 'problem'");
  ProblemId id{};
  try {
    id = problem_from_string(problem->value);
  } catch (const std::invalid_argument& e) {
    bad(problem->where, e.what());
  }
  RunConfig c = default_config(id);
  for (const auto& e : entries) {
    if (e.key == "problem") continue;
    auto it = setters().find(e.key);
    if (it == setters().end()) bad(e.where, "unknown key '" + e.key + "'");
    it->second(c, e.value, e.where);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
  return c;
}

loop::RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides, path.string());
}

std::string echo_config(const loop::RunConfig& c) {
  std::ostringstream o;
  o << "[run]\n"
    << "problem = " << to_string(c.problem) << '\n'
    << "seed = " << c.seed << '\n'
    << "workers = " << c.workers << '\n'
    << "generations = " << c.generations << '\n'
    << "output_dir = " << c.output_dir.string() << '\n'
    << "\n[problem]\n"
    << "n = " << c.params.n << '\n'
    << "k = " << c.params.k << '\n'
    << "delimiters = " << (c.params.delimiters ? "true" : "false") << '\n'
    << "include_diagonal = " << (c.params.include_diagonal ? "true" : "false") << '\n'
    << "max_boxes = " << c.params.max_boxes << '\n'
    << "over_weight = " << c.params.over_weight << '\n'
    << "under_weight = " << c.params.under_weight << '\n'
    << "\n[pool]\n"
    << "pool_capacity = " << c.pool_capacity << '\n'
    << "selection_fraction = " << real_text(c.selection_fraction) << '\n'
    << "seed_runs = " << c.seed_runs << '\n'
    << "seed_start = " << (c.seed_start == loop::SeedStart::empty ? "empty" : "random") << '\n'
    << "local_search = " << (c.local_search ? "true" : "false") << '\n'
    << "\n[sampling]\n"
    << "samples = " << c.samples << '\n'
    << "\n[model]\n"
    << "layers = " << c.layers << '\n'
    << "dim = " << c.dim << '\n'
    << "heads = " << c.heads << '\n'
    << "\n[train]\n"
    << "lr = " << real_text(c.adam.lr) << '\n'
    << "weight_decay = " << real_text(c.adam.weight_decay) << '\n'
    << "beta1 = " << real_text(c.adam.beta1) << '\n'
    << "beta2 = " << real_text(c.adam.beta2) << '\n'
    << "eps = " << real_text(c.adam.eps) << '\n'
    << "batch = " << c.batch << '\n'
    << "initial_train_steps = " << c.initial_train_steps << '\n'
    << "train_steps = " << c.train_steps << '\n'
    << "\n[tokenizer]\n"
    << "tokenizer = " << tokenizer::to_string(c.tokenizer) << '\n'
    << "bpe_vocab = " << c.bpe_vocab << '\n'
    << "fixed_width = " << c.fixed_width << '\n';
  return o.str();
}

void apply_seed_env(loop::RunConfig& c) {
  if (const char* s = std::getenv("PATTERNBOOST_SEED"); s && *s) c.seed = to_uint(s, "PATTERNBOOST_SEED");
}

}  // namespace pb::cli
