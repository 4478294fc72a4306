#include "patternboost/transformer/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "patternboost/kernels/kernels.hpp"

namespace pb::transformer {

void ModelConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("model config: " + m); };
  if (n_layers < 1) fail("layers must be positive");
  if (dim < 1) fail("dim must be positive");
  if (n_heads < 1) fail("heads must be positive");
  if (dim % n_heads != 0) fail("dim " + std::to_string(dim) + " is not divisible by heads " + std::to_string(n_heads));
  if (vocab < 2) fail("vocab must hold at least the two special tokens");
  if (max_len < 2) fail("max_len must be at least 2");
}

Layout::Layout(const ModelConfig& c) {
  const std::size_t d = static_cast<std::size_t>(c.dim), v = static_cast<std::size_t>(c.vocab);
  std::size_t at = 0;
  auto take = [&](std::size_t n) {
    std::size_t o = at;
    at += n;
    return o;
  };
  wte = take(v * d);
  wpe = take(static_cast<std::size_t>(c.max_len) * d);
  for (int l = 0; l < c.n_layers; ++l) {
    Block b{};
    b.ln1_g = take(d);
    b.ln1_b = take(d);
    b.w_qkv = take(d * 3 * d);
    b.b_qkv = take(3 * d);
    b.w_o = take(d * d);
    b.b_o = take(d);
    b.ln2_g = take(d);
    b.ln2_b = take(d);
    b.w_fc = take(d * 4 * d);
    b.b_fc = take(4 * d);
    b.w_proj = take(4 * d * d);
    b.b_proj = take(d);
    blocks.push_back(b);
  }
  lnf_g = take(d);
  lnf_b = take(d);
  w_head = take(d * v);
  total = at;
}

namespace {

constexpr double kLnEps = 1e-5;

template <class T>
T gelu(T x) {
  const T c = static_cast<T>(0.7978845608028654);  // sqrt(2 / pi)
  return T(0.5) * x * (T(1) + std::tanh(c * (x + T(0.044715) * x * x * x)));
}

template <class T>
T gelu_grad(T x) {
  const T c = static_cast<T>(0.7978845608028654);
  const T t = std::tanh(c * (x + T(0.044715) * x * x * x));
  return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * c * (T(1) + T(3 * 0.044715) * x * x);
}

template <class T>
void layernorm_fwd(T* y, T* mean, T* rstd, const T* x, const T* g, const T* b, std::size_t rows, std::size_t d) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x + r * d;
    T mu = 0;
    for (std::size_t i = 0; i < d; ++i) mu += xr[i];
    mu /= static_cast<T>(d);
    T var = 0;
    for (std::size_t i = 0; i < d; ++i) var += (xr[i] - mu) * (xr[i] - mu);
    var /= static_cast<T>(d);
    const T rs = T(1) / std::sqrt(var + static_cast<T>(kLnEps));
    for (std::size_t i = 0; i < d; ++i) y[r * d + i] = (xr[i] - mu) * rs * g[i] + b[i];
    mean[r] = mu;
    rstd[r] = rs;
  }
}

// Adds the input gradient into dx.
template <class T>
void layernorm_bwd(T* dx, T* dg, T* db, const T* dy, const T* x, const T* mean, const T* rstd, const T* g,
                   std::size_t rows, std::size_t d) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x + r * d;
    const T* dyr = dy + r * d;
    T mean_dxhat = 0, mean_dxhat_xhat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const T xhat = (xr[i] - mean[r]) * rstd[r];
      const T dxhat = dyr[i] * g[i];
      dg[i] += dyr[i] * xhat;
      db[i] += dyr[i];
      mean_dxhat += dxhat;
      mean_dxhat_xhat += dxhat * xhat;
    }
    mean_dxhat /= static_cast<T>(d);
    mean_dxhat_xhat /= static_cast<T>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const T xhat = (xr[i] - mean[r]) * rstd[r];
      dx[r * d + i] += rstd[r] * (dyr[i] * g[i] - mean_dxhat - xhat * mean_dxhat_xhat);
    }
  }
}

// Numerically stable softmax of one row, in place; returns log of the normalizer.
template <class T>
T softmax_row(T* z, std::size_t n) {
  T mx = z[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, z[i]);
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::exp(z[i] - mx);
    s += z[i];
  }
  for (std::size_t i = 0; i < n; ++i) z[i] /= s;
  return mx + std::log(s);
}

template <class T>
struct LayerCache {
  std::vector<T> ln1, mu1, rs1, qkv, att, ao, xmid, ln2, mu2, rs2, h, g;
};

template <class T>
struct Cache {
  std::size_t L = 0;
  std::vector<std::vector<T>> res;  // residual stream entering each block, plus the final one
  std::vector<LayerCache<T>> layers;
  std::vector<T> lnf, muf, rsf, logits;
};

template <class T>
void forward_pass(const ModelConfig& cfg, const Layout& lay, const std::vector<T>& P, const std::vector<int>& tok,
                  Cache<T>& c) {
  const auto& K = kernels::active();
  const std::size_t L = tok.size(), d = static_cast<std::size_t>(cfg.dim), V = static_cast<std::size_t>(cfg.vocab);
  const std::size_t H = static_cast<std::size_t>(cfg.n_heads), hd = d / H;
  const T scale = T(1) / std::sqrt(static_cast<T>(hd));
  c.L = L;
  c.res.assign(static_cast<std::size_t>(cfg.n_layers) + 1, std::vector<T>(L * d));
  c.layers.resize(static_cast<std::size_t>(cfg.n_layers));

  auto& x0 = c.res[0];
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < d; ++j)
      x0[i * d + j] = P[lay.wte + static_cast<std::size_t>(tok[i]) * d + j] + P[lay.wpe + i * d + j];

  for (std::size_t l = 0; l < lay.blocks.size(); ++l) {
    const auto& B = lay.blocks[l];
    auto& C = c.layers[l];
    const auto& x = c.res[l];
    C.ln1.resize(L * d);
    C.mu1.resize(L);
    C.rs1.resize(L);
    layernorm_fwd(C.ln1.data(), C.mu1.data(), C.rs1.data(), x.data(), &P[B.ln1_g], &P[B.ln1_b], L, d);
    C.qkv.resize(L * 3 * d);
    kernels::linear_fwd(K, C.qkv.data(), C.ln1.data(), &P[B.w_qkv], &P[B.b_qkv], L, d, 3 * d);

    C.att.assign(H * L * L, T(0));
    C.ao.assign(L * d, T(0));
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t i = 0; i < L; ++i) {
        T* a = &C.att[(h * L + i) * L];
        const T* q = &C.qkv[i * 3 * d + h * hd];
        for (std::size_t j = 0; j <= i; ++j) a[j] = kernels::dot(q, &C.qkv[j * 3 * d + d + h * hd], hd) * scale;
        softmax_row(a, i + 1);
        T* o = &C.ao[i * d + h * hd];
        for (std::size_t j = 0; j <= i; ++j) kernels::axpy(o, a[j], &C.qkv[j * 3 * d + 2 * d + h * hd], hd);
      }

    C.xmid.resize(L * d);
    kernels::linear_fwd(K, C.xmid.data(), C.ao.data(), &P[B.w_o], &P[B.b_o], L, d, d);
    for (std::size_t i = 0; i < L * d; ++i) C.xmid[i] += x[i];

    C.ln2.resize(L * d);
    C.mu2.resize(L);
    C.rs2.resize(L);
    layernorm_fwd(C.ln2.data(), C.mu2.data(), C.rs2.data(), C.xmid.data(), &P[B.ln2_g], &P[B.ln2_b], L, d);
    C.h.resize(L * 4 * d);
    kernels::linear_fwd(K, C.h.data(), C.ln2.data(), &P[B.w_fc], &P[B.b_fc], L, d, 4 * d);
    C.g.resize(L * 4 * d);
    for (std::size_t i = 0; i < C.h.size(); ++i) C.g[i] = gelu(C.h[i]);
    auto& out = c.res[l + 1];
    kernels::linear_fwd(K, out.data(), C.g.data(), &P[B.w_proj], &P[B.b_proj], L, 4 * d, d);
    for (std::size_t i = 0; i < L * d; ++i) out[i] += C.xmid[i];
  }

  c.lnf.resize(L * d);
  c.muf.resize(L);
  c.rsf.resize(L);
  layernorm_fwd(c.lnf.data(), c.muf.data(), c.rsf.data(), c.res.back().data(), &P[lay.lnf_g], &P[lay.lnf_b], L, d);
  c.logits.resize(L * V);
  kernels::linear_fwd(K, c.logits.data(), c.lnf.data(), &P[lay.w_head], static_cast<const T*>(nullptr), L, d, V);
}

}  // namespace

template <class T>
Model<T>::Model(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  layout_ = Layout(cfg_);
  params_.assign(layout_.total, T(0));
  Rng rng(derive_seed(cfg_.seed, {0x6d6f64656cULL}));
  std::normal_distribution<double> normal(0.0, 0.02);
  const std::size_t d = static_cast<std::size_t>(cfg_.dim), v = static_cast<std::size_t>(cfg_.vocab);
  auto fill = [&](std::size_t at, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) params_[at + i] = static_cast<T>(normal(rng));
  };
  auto ones = [&](std::size_t at, std::size_t n) { std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(at), n, T(1)); };
  fill(layout_.wte, v * d);
  fill(layout_.wpe, static_cast<std::size_t>(cfg_.max_len) * d);
  for (const auto& b : layout_.blocks) {
    ones(b.ln1_g, d);
    fill(b.w_qkv, d * 3 * d);
    fill(b.w_o, d * d);
    ones(b.ln2_g, d);
    fill(b.w_fc, d * 4 * d);
    fill(b.w_proj, 4 * d * d);
  }
  ones(layout_.lnf_g, d);
  fill(layout_.w_head, d * v);
}

template <class T>
void Model<T>::check_tokens(const std::vector<int>& tokens) const {
  if (tokens.empty()) throw std::invalid_argument("empty token sequence");
  if (tokens.size() > static_cast<std::size_t>(cfg_.max_len))
    throw std::invalid_argument("sequence of " + std::to_string(tokens.size()) + " tokens exceeds max_len " +
                                std::to_string(cfg_.max_len));
  for (int t : tokens)
    if (t < 0 || t >= cfg_.vocab) throw std::invalid_argument("token " + std::to_string(t) + " outside the vocabulary");
}

template <class T>
std::vector<T> Model<T>::logits(const std::vector<int>& tokens) const {
  check_tokens(tokens);
  Cache<T> c;
  forward_pass(cfg_, layout_, params_, tokens, c);
  return std::move(c.logits);
}

template <class T>
std::vector<T> Model<T>::probabilities(const std::vector<int>& tokens) const {
  auto z = logits(tokens);
  const auto V = static_cast<std::size_t>(cfg_.vocab);
  for (std::size_t i = 0; i < tokens.size(); ++i) softmax_row(&z[i * V], V);
  return z;
}

template <class T>
T Model<T>::loss(const std::vector<int>& tokens) const {
  auto z = logits(tokens);
  const auto V = static_cast<std::size_t>(cfg_.vocab);
  T total = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const T target = z[i * V + static_cast<std::size_t>(tokens[i + 1])];
    total += softmax_row(&z[i * V], V) - target;
  }
  return total;
}

template <class T>
T Model<T>::backward(const std::vector<int>& tokens, std::vector<T>& grad) const {
  check_tokens(tokens);
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer has the wrong size");
  const auto& K = kernels::active();
  const auto& P = params_;
  const auto& lay = layout_;
  Cache<T> c;
  forward_pass(cfg_, lay, P, tokens, c);
  const std::size_t L = tokens.size(), d = static_cast<std::size_t>(cfg_.dim), V = static_cast<std::size_t>(cfg_.vocab);
  const std::size_t H = static_cast<std::size_t>(cfg_.n_heads), hd = d / H;
  const T scale = T(1) / std::sqrt(static_cast<T>(hd));

  // Cross-entropy on positions 0..L-2; the last position predicts nothing.
  std::vector<T> dlogits(L * V, T(0));
  T total = 0;
  for (std::size_t i = 0; i + 1 < L; ++i) {
    T* z = &c.logits[i * V];
    const auto target = static_cast<std::size_t>(tokens[i + 1]);
    const T target_logit = z[target];
    total += softmax_row(z, V) - target_logit;
    for (std::size_t j = 0; j < V; ++j) dlogits[i * V + j] = z[j];
    dlogits[i * V + target] -= T(1);
  }

  std::vector<T> dlnf(L * d, T(0));
  kernels::linear_bwd(K, dlnf.data(), &grad[lay.w_head], static_cast<T*>(nullptr), c.lnf.data(), &P[lay.w_head],
                      dlogits.data(), L, d, V);
  std::vector<T> dx(L * d, T(0));
  layernorm_bwd(dx.data(), &grad[lay.lnf_g], &grad[lay.lnf_b], dlnf.data(), c.res.back().data(), c.muf.data(),
                c.rsf.data(), &P[lay.lnf_g], L, d);

  std::vector<T> dg, dh, dln, dxmid, dao, dqkv, datt(L);
  for (std::size_t l = lay.blocks.size(); l-- > 0;) {
    const auto& B = lay.blocks[l];
    const auto& C = c.layers[l];

    // MLP branch; dx is the gradient at the block output.
    dg.assign(L * 4 * d, T(0));
    kernels::linear_bwd(K, dg.data(), &grad[B.w_proj], &grad[B.b_proj], C.g.data(), &P[B.w_proj], dx.data(), L,
                        4 * d, d);
    dh.resize(L * 4 * d);
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] = dg[i] * gelu_grad(C.h[i]);
    dln.assign(L * d, T(0));
    kernels::linear_bwd(K, dln.data(), &grad[B.w_fc], &grad[B.b_fc], C.ln2.data(), &P[B.w_fc], dh.data(), L, d, 4 * d);
    dxmid = dx;
    layernorm_bwd(dxmid.data(), &grad[B.ln2_g], &grad[B.ln2_b], dln.data(), C.xmid.data(), C.mu2.data(),
                  C.rs2.data(), &P[B.ln2_g], L, d);

    // Attention branch.
    dao.assign(L * d, T(0));
    kernels::linear_bwd(K, dao.data(), &grad[B.w_o], &grad[B.b_o], C.ao.data(), &P[B.w_o], dxmid.data(), L, d, d);
    dqkv.assign(L * 3 * d, T(0));
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t i = 0; i < L; ++i) {
        const T* a = &C.att[(h * L + i) * L];
        const T* dout = &dao[i * d + h * hd];
        T dot_sum = 0;
        for (std::size_t j = 0; j <= i; ++j) {
          const T* vj = &C.qkv[j * 3 * d + 2 * d + h * hd];
          datt[j] = kernels::dot(dout, vj, hd);
          dot_sum += datt[j] * a[j];
          kernels::axpy(&dqkv[j * 3 * d + 2 * d + h * hd], a[j], dout, hd);
        }
        const T* qi = &C.qkv[i * 3 * d + h * hd];
        T* dqi = &dqkv[i * 3 * d + h * hd];
        for (std::size_t j = 0; j <= i; ++j) {
          const T ds = a[j] * (datt[j] - dot_sum) * scale;
          kernels::axpy(dqi, ds, &C.qkv[j * 3 * d + d + h * hd], hd);
          kernels::axpy(&dqkv[j * 3 * d + d + h * hd], ds, qi, hd);
        }
      }
    dln.assign(L * d, T(0));
    kernels::linear_bwd(K, dln.data(), &grad[B.w_qkv], &grad[B.b_qkv], C.ln1.data(), &P[B.w_qkv], dqkv.data(), L, d,
                        3 * d);
    dx = dxmid;
    layernorm_bwd(dx.data(), &grad[B.ln1_g], &grad[B.ln1_b], dln.data(), c.res[l].data(), C.mu1.data(), C.rs1.data(),
                  &P[B.ln1_g], L, d);
  }

  for (std::size_t i = 0; i < L; ++i) {
    kernels::axpy(&grad[lay.wte + static_cast<std::size_t>(tokens[i]) * d], T(1), &dx[i * d], d);
    kernels::axpy(&grad[lay.wpe + i * d], T(1), &dx[i * d], d);
  }
  return total;
}

template <class T>
void AdamW<T>::update(std::vector<T>& params, const std::vector<T>& grad) {
  if (m.size() != params.size() || grad.size() != params.size())
    throw std::invalid_argument("optimizer state does not match the parameters");
  ++step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  const T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
  const T decay = static_cast<T>(1.0 - cfg.lr * cfg.weight_decay);
  const T step_size = static_cast<T>(cfg.lr / bc1);
  const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
  const T eps = static_cast<T>(cfg.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = b1 * m[i] + (T(1) - b1) * grad[i];
    v[i] = b2 * v[i] + (T(1) - b2) * grad[i] * grad[i];
    params[i] *= decay;
    params[i] -= step_size * m[i] / (std::sqrt(v[i]) * inv_sqrt_bc2 + eps);
  }
}

template <class T>
double train_step(Model<T>& model, AdamW<T>& opt, const std::vector<std::vector<int>>& batch) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  std::vector<T> grad(model.size(), T(0));
  double loss = 0;
  std::size_t predicted = 0;
  for (const auto& seq : batch) {
    loss += static_cast<double>(model.backward(seq, grad));
    predicted += seq.size() - 1;
  }
  if (predicted == 0) throw std::invalid_argument("train_step: batch has nothing to predict");
  const double mean = loss / static_cast<double>(predicted);
  if (!std::isfinite(mean)) throw std::runtime_error("train_step: non-finite loss at optimizer step " + std::to_string(opt.step + 1));
  const T inv = static_cast<T>(1.0 / static_cast<double>(predicted));
  for (auto& g : grad) g *= inv;
  opt.update(model.params(), grad);
  return mean;
}

template <class T>
Sample sample(const Model<T>& model, Rng& rng, int start_token, int end_token) {
  const auto& cfg = model.config();
  const auto& lay = model.layout();
  const auto& P = model.params();
  const auto& K = kernels::active();
  const std::size_t d = static_cast<std::size_t>(cfg.dim), V = static_cast<std::size_t>(cfg.vocab);
  const std::size_t H = static_cast<std::size_t>(cfg.n_heads), hd = d / H;
  const std::size_t maxL = static_cast<std::size_t>(cfg.max_len);
  const T scale = T(1) / std::sqrt(static_cast<T>(hd));
  const std::size_t nl = lay.blocks.size();

  std::vector<T> kcache(nl * maxL * d), vcache(nl * maxL * d);
  std::vector<T> x(d), ln(d), qkv(3 * d), ao(d), tmp(d), h(4 * d), att(maxL), logits(V);
  T mu, rs;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Sample out;
  int tok = start_token;
  for (std::size_t pos = 0; pos + 1 < maxL; ++pos) {
    for (std::size_t j = 0; j < d; ++j) x[j] = P[lay.wte + static_cast<std::size_t>(tok) * d + j] + P[lay.wpe + pos * d + j];
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& B = lay.blocks[l];
      layernorm_fwd(ln.data(), &mu, &rs, x.data(), &P[B.ln1_g], &P[B.ln1_b], 1, d);
      kernels::linear_fwd(K, qkv.data(), ln.data(), &P[B.w_qkv], &P[B.b_qkv], 1, d, 3 * d);
      T* kc = &kcache[(l * maxL) * d];
      T* vc = &vcache[(l * maxL) * d];
      std::copy_n(&qkv[d], d, kc + pos * d);
      std::copy_n(&qkv[2 * d], d, vc + pos * d);
      std::fill(ao.begin(), ao.end(), T(0));
      for (std::size_t hh = 0; hh < H; ++hh) {
        for (std::size_t j = 0; j <= pos; ++j) att[j] = kernels::dot(&qkv[hh * hd], kc + j * d + hh * hd, hd) * scale;
        softmax_row(att.data(), pos + 1);
        for (std::size_t j = 0; j <= pos; ++j) kernels::axpy(&ao[hh * hd], att[j], vc + j * d + hh * hd, hd);
      }
      kernels::linear_fwd(K, tmp.data(), ao.data(), &P[B.w_o], &P[B.b_o], 1, d, d);
      for (std::size_t j = 0; j < d; ++j) x[j] += tmp[j];
      layernorm_fwd(ln.data(), &mu, &rs, x.data(), &P[B.ln2_g], &P[B.ln2_b], 1, d);
      kernels::linear_fwd(K, h.data(), ln.data(), &P[B.w_fc], &P[B.b_fc], 1, d, 4 * d);
      for (auto& e : h) e = gelu(e);
      kernels::linear_fwd(K, tmp.data(), h.data(), &P[B.w_proj], &P[B.b_proj], 1, 4 * d, d);
      for (std::size_t j = 0; j < d; ++j) x[j] += tmp[j];
    }
    layernorm_fwd(ln.data(), &mu, &rs, x.data(), &P[lay.lnf_g], &P[lay.lnf_b], 1, d);
    kernels::linear_fwd(K, logits.data(), ln.data(), &P[lay.w_head], static_cast<const T*>(nullptr), 1, d, V);
    softmax_row(logits.data(), V);

    double u = unif(rng), acc = 0;
    std::size_t next = V - 1;
    for (std::size_t j = 0; j < V; ++j) {
      acc += static_cast<double>(logits[j]);
      if (u < acc) {
        next = j;
        break;
      }
    }
    if (static_cast<int>(next) == end_token) {
      out.ended = true;
      return out;
    }
    if (pos + 2 == maxL) break;  // no room left for END
    tok = static_cast<int>(next);
    out.tokens.push_back(tok);
  }
  return out;
}

template class Model<float>;
template class Model<double>;
template struct AdamW<float>;
template struct AdamW<double>;
template double train_step<float>(Model<float>&, AdamW<float>&, const std::vector<std::vector<int>>&);
template double train_step<double>(Model<double>&, AdamW<double>&, const std::vector<std::vector<int>>&);
template Sample sample<float>(const Model<float>&, Rng&, int, int);
template Sample sample<double>(const Model<double>&, Rng&, int, int);

}  // namespace pb::transformer
