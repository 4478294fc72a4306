#include "patternboost/core/pool.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pb {

Pool::Pool(ProblemId problem, std::size_t payload_length, std::size_t capacity)
    : problem_(problem), payload_length_(payload_length), capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("pool capacity must be positive");
}

Pool::InsertResult Pool::insert(const ScoredConstruction& c) {
  if (c.construction.problem != problem_)
    throw ShapeError("construction for problem " + std::string(to_string(c.construction.problem)) +
                     " inserted into a " + std::string(to_string(problem_)) + " pool");
  return insert(c.construction.payload, c.score);
}

Pool::InsertResult Pool::insert(Payload payload, Score score) {
  if (payload.size() != payload_length_)
    throw ShapeError("payload length " + std::to_string(payload.size()) + " does not match pool length " +
                     std::to_string(payload_length_));
  for (auto s : payload)
    if (s > 9) throw ShapeError("payload symbol " + std::to_string(s) + " does not fit a digit");

  auto k = key(payload);
  if (index_.contains(k)) return InsertResult::duplicate;
  if (full()) {
    auto last = std::prev(entries_.end());
    if (score <= last->score) return InsertResult::below_minimum;
    index_.erase(key(last->payload));
    entries_.erase(last);
  }
  index_.insert(std::move(k));
  entries_.insert(Entry{score, std::move(payload)});
  return InsertResult::inserted;
}

std::vector<ScoredConstruction> Pool::entries() const {
  std::vector<ScoredConstruction> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({Construction{problem_, e.payload}, e.score});
  return out;
}

std::optional<Score> Pool::best_score() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.begin()->score;
}

std::optional<Score> Pool::min_score() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.rbegin()->score;
}

double Pool::mean_score() const {
  if (entries_.empty()) return 0.0;
  long double sum = 0;
  for (const auto& e : entries_) sum += static_cast<long double>(e.score);
  return static_cast<double>(sum / entries_.size());
}

void Pool::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write pool file " + path.string());
  out << "patternboost-pool v1 " << to_string(problem_) << ' ' << payload_length_ << '\n';
  std::string line;
  for (const auto& e : entries_) {
    line = std::to_string(e.score);
    line.push_back('\t');
    for (auto s : e.payload) line.push_back(static_cast<char>('0' + s));
    line.push_back('\n');
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing pool file " + path.string());
}

Pool Pool::load(const std::filesystem::path& path, std::size_t capacity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read pool file " + path.string());
  auto fail = [&](std::size_t line_no, const std::string& what) -> std::runtime_error {
    return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  if (!std::getline(in, line)) throw fail(1, "missing header");
  std::istringstream header(line);
  std::string magic, version, problem_name;
  std::size_t len = 0;
  if (!(header >> magic >> version >> problem_name >> len) || magic != "patternboost-pool" || version != "v1")
    throw fail(1, "bad header '" + line + "'");
  ProblemId problem;
  try {
    problem = problem_from_string(problem_name);
  } catch (const std::invalid_argument& e) {
    throw fail(1, e.what());
  }

  Pool pool(problem, len, capacity);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail(line_no, "expected <score>\\t<payload>");
    Score score = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, score);
    if (ec != std::errc() || ptr != line.data() + tab) throw fail(line_no, "bad score");
    std::string_view digits(line.data() + tab + 1, line.size() - tab - 1);
    if (digits.size() != len)
      throw fail(line_no, "payload length " + std::to_string(digits.size()) + ", expected " + std::to_string(len));
    Payload payload;
    payload.reserve(len);
    for (char ch : digits) {
      if (ch < '0' || ch > '9') throw fail(line_no, "non-digit payload symbol");
      payload.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    if (pool.insert(std::move(payload), score) == InsertResult::duplicate)
      throw fail(line_no, "duplicate payload");
  }
  return pool;
}

bool operator==(const Pool& a, const Pool& b) {
  if (a.problem_ != b.problem_ || a.payload_length_ != b.payload_length_ || a.capacity_ != b.capacity_ ||
      a.entries_.size() != b.entries_.size())
    return false;
  auto ia = a.entries_.begin();
  for (auto ib = b.entries_.begin(); ib != b.entries_.end(); ++ia, ++ib)
    if (ia->score != ib->score || ia->payload != ib->payload) return false;
  return true;
}

}  // namespace pb
