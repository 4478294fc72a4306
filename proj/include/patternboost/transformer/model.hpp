#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "patternboost/core/rng.hpp"

namespace pb::transformer {

struct ModelConfig {
  int n_layers = 2;
  int dim = 16;
  int n_heads = 4;
  int vocab = 0;    // content tokens + START + END
  int max_len = 0;  // longest token sequence, START and END included
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  int head_dim() const { return dim / n_heads; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Offsets of every tensor inside the flat parameter vector, in declaration order.
struct Layout {
  struct Block {
    std::size_t ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o, ln2_g, ln2_b, w_fc, b_fc, w_proj, b_proj;
  };
  std::size_t wte = 0, wpe = 0;
  std::vector<Block> blocks;
  std::size_t lnf_g = 0, lnf_b = 0, w_head = 0;
  std::size_t total = 0;

  explicit Layout(const ModelConfig& c);
  Layout() = default;
};

/// Pre-norm decoder-only transformer: token + position embeddings, n_layers blocks of
/// causal multi-head attention and a 4d GELU MLP, final LayerNorm, linear head.
template <class T>
class Model {
 public:
  Model() = default;
  /// Gaussian(0, 0.02) weights from cfg.seed, zero biases, unit LayerNorm gains.
  explicit Model(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }
  const Layout& layout() const { return layout_; }
  std::vector<T>& params() { return params_; }
  const std::vector<T>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }

  /// Next-token logits, one row of `vocab` values per input position.
  std::vector<T> logits(const std::vector<int>& tokens) const;
  /// Softmax of logits(), row-major.
  std::vector<T> probabilities(const std::vector<int>& tokens) const;
  /// Sum over positions of -log p(tokens[i + 1] | tokens[0..i]).
  T loss(const std::vector<int>& tokens) const;
  /// Adds d loss / d params into grad (same layout as params) and returns the loss.
  T backward(const std::vector<int>& tokens, std::vector<T>& grad) const;

  friend bool operator==(const Model& a, const Model& b) { return a.cfg_ == b.cfg_ && a.params_ == b.params_; }

 private:
  void check_tokens(const std::vector<int>& tokens) const;

  ModelConfig cfg_;
  Layout layout_;
  std::vector<T> params_;
};

struct AdamWConfig {
  double lr = 5e-4;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  friend bool operator==(const AdamWConfig&, const AdamWConfig&) = default;
};

template <class T>
struct AdamW {
  AdamWConfig cfg;
  std::vector<T> m;
  std::vector<T> v;
  std::uint64_t step = 0;

  AdamW() = default;
  AdamW(AdamWConfig c, std::size_t n) : cfg(c), m(n, T(0)), v(n, T(0)) {}

  /// Decoupled decay then the bias-corrected Adam update.
  void update(std::vector<T>& params, const std::vector<T>& grad);

  friend bool operator==(const AdamW& a, const AdamW& b) {
    return a.cfg == b.cfg && a.m == b.m && a.v == b.v && a.step == b.step;
  }
};

/// One optimizer update over a window of examples. Gradients are summed over the window
/// and divided by its number of predicted tokens. Returns the mean per-token loss.
/// Throws std::runtime_error on a non-finite loss, leaving params and optimizer untouched.
template <class T>
double train_step(Model<T>& model, AdamW<T>& opt, const std::vector<std::vector<int>>& batch);

struct Sample {
  std::vector<int> tokens;  // content tokens, END excluded
  bool ended = false;       // false when max_len was reached first
};

/// Ancestral sampling from START at temperature 1, with cached keys and values.
template <class T>
Sample sample(const Model<T>& model, Rng& rng, int start_token, int end_token);

extern template class Model<float>;
extern template class Model<double>;
extern template struct AdamW<float>;
extern template struct AdamW<double>;

}  // namespace pb::transformer
