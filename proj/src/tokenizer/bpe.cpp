#include "patternboost/tokenizer/bpe.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "patternboost/tokenizer/flatten.hpp"

namespace pb::tokenizer {

Vocab::Vocab(std::vector<std::string> base_labels) : labels_(std::move(base_labels)) {
  if (labels_.empty()) throw std::invalid_argument("vocabulary needs at least one base symbol");
  for (std::size_t i = 0; i < labels_.size(); ++i) expansion_.push_back({static_cast<int>(i)});
}

int Vocab::add_merge(int left, int right) {
  const auto sz = static_cast<int>(size());
  if (left < 0 || right < 0 || left >= sz || right >= sz)
    throw std::invalid_argument("merge refers to token outside the vocabulary");
  merges_.emplace_back(left, right);
  auto e = expansion_[static_cast<std::size_t>(left)];
  const auto& r = expansion_[static_cast<std::size_t>(right)];
  e.insert(e.end(), r.begin(), r.end());
  expansion_.push_back(std::move(e));
  return sz;
}

const std::vector<int>& Vocab::expand(int token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= size())
    throw DecodeError("token " + std::to_string(token) + " not in the vocabulary");
  return expansion_[static_cast<std::size_t>(token)];
}

std::string Vocab::label(int token) const {
  std::string s;
  for (int b : expand(token)) s += labels_[static_cast<std::size_t>(b)];
  return s;
}

void Vocab::write(std::ostream& out) const {
  out << "base " << labels_.size();
  for (const auto& l : labels_) out << ' ' << l;
  out << '\n';
  for (std::size_t i = 0; i < merges_.size(); ++i)
    out << base_count() + i << ' ' << merges_[i].first << ' ' << merges_[i].second << '\n';
}

Vocab Vocab::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("vocabulary: missing base line");
  std::istringstream head(line);
  std::string word;
  std::size_t count = 0;
  if (!(head >> word >> count) || word != "base" || count == 0)
    throw std::runtime_error("vocabulary: malformed base line '" + line + "'");
  std::vector<std::string> labels(count);
  for (auto& l : labels)
    if (!(head >> l)) throw std::runtime_error("vocabulary: base line lists fewer than " + std::to_string(count) + " labels");
  Vocab v(std::move(labels));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long id = 0, left = 0, right = 0;
    if (!(ls >> id >> left >> right)) throw std::runtime_error("vocabulary: malformed merge line '" + line + "'");
    if (id != static_cast<long long>(v.size()))
      throw std::runtime_error("vocabulary: merge id " + std::to_string(id) + " out of sequence");
    v.add_merge(static_cast<int>(left), static_cast<int>(right));
  }
  return v;
}

namespace {

// One left-to-right pass replacing non-overlapping (a, b) by t.
void apply_merge(std::vector<int>& s, int a, int b, int t) {
  std::size_t w = 0;
  for (std::size_t r = 0; r < s.size();) {
    if (r + 1 < s.size() && s[r] == a && s[r + 1] == b) {
      s[w++] = t;
      r += 2;
    } else {
      s[w++] = s[r++];
    }
  }
  s.resize(w);
}

}  // namespace

Vocab bpe_train(const std::vector<std::vector<int>>& corpus, std::vector<std::string> base_labels,
                std::size_t vocab_size) {
  if (corpus.empty()) throw std::invalid_argument("bpe_train: empty corpus");
  if (vocab_size < base_labels.size())
    throw std::invalid_argument("bpe_train: vocab_size " + std::to_string(vocab_size) + " is below the " +
                                std::to_string(base_labels.size()) + " base symbols");
  if (vocab_size > kMaxBpeVocab)
    throw std::invalid_argument("bpe_train: vocab_size above " + std::to_string(kMaxBpeVocab));
  Vocab v(std::move(base_labels));
  const auto base = static_cast<int>(v.base_count());
  auto seqs = corpus;
  for (const auto& s : seqs)
    for (int x : s)
      if (x < 0 || x >= base) throw std::invalid_argument("bpe_train: symbol " + std::to_string(x) + " outside the base");

  const std::size_t V = vocab_size;
  constexpr auto kNever = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint32_t> count(V * V);
  std::vector<std::uint64_t> first(V * V);
  while (v.size() < vocab_size) {
    std::fill(count.begin(), count.end(), 0);
    std::fill(first.begin(), first.end(), kNever);
    std::uint64_t position = 0;
    for (const auto& s : seqs) {
      for (std::size_t i = 0; i + 1 < s.size(); ++i, ++position) {
        const std::size_t key = static_cast<std::size_t>(s[i]) * V + static_cast<std::size_t>(s[i + 1]);
        if (count[key]++ == 0) first[key] = position;
      }
      ++position;
    }
    std::size_t best = 0;
    for (std::size_t key = 1; key < count.size(); ++key)
      if (count[key] > count[best] || (count[key] == count[best] && first[key] < first[best])) best = key;
    if (count[best] < 2) break;
    const int a = static_cast<int>(best / V), b = static_cast<int>(best % V);
    const int t = v.add_merge(a, b);
    for (auto& s : seqs) apply_merge(s, a, b, t);
  }
  return v;
}

std::vector<int> bpe_encode(const Vocab& v, const std::vector<int>& base) {
  for (int x : base)
    if (x < 0 || static_cast<std::size_t>(x) >= v.base_count())
      throw std::invalid_argument("bpe_encode: symbol " + std::to_string(x) + " outside the base");
  auto s = base;
  int t = static_cast<int>(v.base_count());
  for (auto [a, b] : v.merges()) apply_merge(s, a, b, t++);
  return s;
}

std::vector<int> bpe_decode(const Vocab& v, const std::vector<int>& tokens) {
  std::vector<int> out;
  for (int t : tokens) {
    const auto& e = v.expand(t);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

}  // namespace pb::tokenizer
