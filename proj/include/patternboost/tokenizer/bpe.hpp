#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pb::tokenizer {

/// Base symbols plus an ordered list of merges. Token ids below base_count() are base
/// symbols; merge i creates token base_count() + i.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<std::string> base_labels);

  std::size_t base_count() const { return labels_.size(); }
  std::size_t size() const { return labels_.size() + merges_.size(); }
  const std::vector<std::string>& base_labels() const { return labels_; }
  const std::vector<std::pair<int, int>>& merges() const { return merges_; }

  /// Appends a merge of two existing tokens and returns the new id.
  int add_merge(int left, int right);

  /// Base-symbol expansion of a token. Throws DecodeError for unknown ids.
  const std::vector<int>& expand(int token) const;
  /// Concatenated labels of the expansion, e.g. "10".
  std::string label(int token) const;

  /// `base <count> <labels...>` then one `<id> <left> <right>` line per merge.
  void write(std::ostream& out) const;
  static Vocab read(std::istream& in);

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.labels_ == b.labels_ && a.merges_ == b.merges_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::pair<int, int>> merges_;
  std::vector<std::vector<int>> expansion_;
};

/// Largest vocabulary bpe_train accepts.
inline constexpr std::size_t kMaxBpeVocab = 2048;

/// Greedy byte-pair merges: repeatedly merges the most frequent adjacent pair (counted
/// with overlaps, within each string), ties going to the pair seen first in corpus order.
/// Stops at vocab_size tokens or when no pair occurs twice. Throws std::invalid_argument
/// on an empty corpus, a symbol outside the base alphabet, or vocab_size below the base.
Vocab bpe_train(const std::vector<std::vector<int>>& corpus, std::vector<std::string> base_labels,
                std::size_t vocab_size);

/// Applies the merges in training order, each as one left-to-right pass.
std::vector<int> bpe_encode(const Vocab& v, const std::vector<int>& base);
/// Throws DecodeError on unknown token ids.
std::vector<int> bpe_decode(const Vocab& v, const std::vector<int>& tokens);

}  // namespace pb::tokenizer
