#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "patternboost/core/rng.hpp"
#include "patternboost/transformer/checkpoint.hpp"
#include "patternboost/transformer/model.hpp"

using namespace pb;
using namespace pb::transformer;

namespace {

ModelConfig tiny(int vocab = 6, int max_len = 10) { return {1, 8, 2, vocab, max_len, 3}; }

template <class T>
void perturb(Model<T>& m, std::uint64_t seed, double scale) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> d(0, scale);
  for (auto& p : m.params()) p += static_cast<T>(d(rng));
}

}  // namespace

TEST_CASE("model config validation") {
  CHECK_NOTHROW(tiny().validate());
  CHECK_THROWS_AS((ModelConfig{2, 16, 3, 10, 20, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelConfig{0, 16, 4, 10, 20, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelConfig{1, 8, 2, 1, 20, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelConfig{1, 8, 2, 10, 0, 0}.validate()), std::invalid_argument);
  Model<double> m(tiny());
  CHECK(m.size() == m.layout().total);
  CHECK_THROWS(m.loss({0, 9}));                    // token outside the vocabulary
  CHECK_THROWS(m.loss(std::vector<int>(11, 0)));   // longer than max_len
}

TEST_CASE("zero parameters give uniform predictions") {
  Model<double> m(tiny());
  for (auto& p : m.params()) p = 0;
  const std::vector<int> seq{4, 1, 2, 3, 5};
  const auto probs = m.probabilities(seq);
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(m.loss(seq) == doctest::Approx(4 * std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("softmax rows sum to one and the loss is non-negative") {
  Model<float> m({2, 16, 4, 12, 30, 5});
  perturb(m, 1, 0.2);
  Rng rng = make_rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<int> seq{10};
    while (seq.size() < 2 + uniform_index(rng, 28)) seq.push_back(static_cast<int>(uniform_index(rng, 12)));
    const auto probs = m.probabilities(seq);
    for (std::size_t r = 0; r < seq.size(); ++r) {
      double s = 0;
      for (int v = 0; v < 12; ++v) s += probs[r * 12 + static_cast<std::size_t>(v)];
      CHECK(std::abs(s - 1) <= 1e-6);
    }
    CHECK(m.loss(seq) >= 0);
  }
}

TEST_CASE("causal masking") {
  Model<double> m({2, 8, 2, 7, 12, 9});
  perturb(m, 3, 0.3);
  const std::vector<int> seq{5, 0, 1, 2, 3, 4, 0, 1, 2};
  const auto base = m.logits(seq);
  for (std::size_t j = 1; j < seq.size(); ++j) {
    auto other = seq;
    other[j] = (other[j] + 2) % 5;
    const auto l = m.logits(other);
    for (std::size_t i = 0; i < j * 7; ++i) CHECK(l[i] == base[i]);
  }
}

TEST_CASE("backward matches central differences") {
  Model<double> m(tiny());
  perturb(m, 4, 0.3);
  const std::vector<int> seq{4, 0, 3, 1, 1, 2, 0, 5};
  std::vector<double> grad(m.size(), 0.0);
  const double loss = m.backward(seq, grad);
  CHECK(loss == doctest::Approx(m.loss(seq)).epsilon(1e-12));
  Rng rng = make_rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto i = uniform_index(rng, m.size());
    const double keep = m.params()[i];
    m.params()[i] = keep + 1e-3;
    const double up = m.loss(seq);
    m.params()[i] = keep - 1e-3;
    const double down = m.loss(seq);
    m.params()[i] = keep;
    const double fd = (up - down) / 2e-3;
    const double diff = std::abs(fd - grad[i]);
    CHECK((diff <= 1e-9 || diff <= 1e-4 * std::max(std::abs(fd), std::abs(grad[i]))));
  }

  // Positions past the sequence receive no gradient.
  const auto& lay = m.layout();
  for (std::size_t pos = seq.size(); pos < 10; ++pos)
    for (std::size_t c = 0; c < 8; ++c) CHECK(grad[lay.wpe + pos * 8 + c] == 0.0);
}

TEST_CASE("gradients accumulate over examples") {
  Model<double> m(tiny());
  perturb(m, 6, 0.2);
  const std::vector<int> a{4, 1, 2, 5}, b{4, 3, 3, 0, 5};
  std::vector<double> ga(m.size(), 0.0), gb(m.size(), 0.0), both(m.size(), 0.0);
  m.backward(a, ga);
  m.backward(b, gb);
  m.backward(a, both);
  m.backward(b, both);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(both[i] == doctest::Approx(ga[i] + gb[i]).epsilon(1e-12));
}

TEST_CASE("optimizer") {
  Model<double> m(tiny());
  const auto before = m.params();
  AdamW<double> opt({.lr = 1e-2, .weight_decay = 0}, m.size());
  opt.update(m.params(), std::vector<double>(m.size(), 0.0));
  CHECK(m.params() == before);
  CHECK(opt.step == 1);

  // Memorising one sequence lowers its loss.
  const std::vector<int> seq{4, 0, 1, 1, 2, 3, 0, 5};
  Model<float> f(tiny());
  AdamW<float> fo({.lr = 1e-2}, f.size());
  const double first = f.loss(seq) / 7;
  double last = first;
  for (int s = 0; s < 500; ++s) last = train_step(f, fo, {seq});
  CHECK(last < first);
  CHECK(last < 0.1);

  // The memorised sequence dominates sampling.
  Rng rng = make_rng(7);
  int hits = 0;
  for (int s = 0; s < 100; ++s) {
    const auto out = sample(f, rng, 4, 5);
    hits += out.ended && out.tokens == std::vector<int>{0, 1, 1, 2, 3, 0};
  }
  CHECK(hits > 90);
}

TEST_CASE("training and sampling replay bitwise") {
  auto run = [] {
    Model<float> m({2, 16, 4, 9, 16, 11});
    AdamW<float> opt({}, m.size());
    Rng data = make_rng(8);
    for (int s = 0; s < 15; ++s) {
      std::vector<std::vector<int>> batch;
      for (int b = 0; b < 3; ++b) {
        std::vector<int> t{7};
        while (t.size() < 3 + uniform_index(data, 10)) t.push_back(static_cast<int>(uniform_index(data, 7)));
        t.push_back(8);
        batch.push_back(t);
      }
      train_step(m, opt, batch);
    }
    Rng rng = make_rng(9);
    std::vector<std::vector<int>> samples;
    for (int s = 0; s < 10; ++s) samples.push_back(sample(m, rng, 7, 8).tokens);
    return std::make_tuple(m.params(), opt.m, samples);
  };
  CHECK(run() == run());

  Rng a = make_rng(1), b = make_rng(1);
  Model<float> m({1, 8, 2, 6, 12, 2});
  CHECK(sample(m, a, 4, 5).tokens == sample(m, b, 4, 5).tokens);
  Rng c = make_rng(2);
  const auto s = sample(m, c, 4, 5);
  CHECK(s.tokens.size() <= 11);
  for (int t : s.tokens) CHECK(t != 5);  // START may appear; decoding rejects it
}

TEST_CASE("non-finite loss leaves the model untouched") {
  Model<float> m(tiny());
  AdamW<float> opt({}, m.size());
  m.params()[m.layout().w_head] = std::numeric_limits<float>::infinity();
  const auto params = m.params();
  CHECK_THROWS_AS(train_step(m, opt, {{4, 0, 1, 5}}), std::runtime_error);
  CHECK(std::equal(params.begin(), params.end(), m.params().begin(),
                   [](float x, float y) { return x == y || (std::isnan(x) && std::isnan(y)); }));
  CHECK(opt.step == 0);
}

TEST_CASE("checkpoints round trip bitwise") {
  const auto path = std::filesystem::temp_directory_path() / "pb_model.ckpt";
  Model<float> m({2, 16, 4, 11, 20, 4});
  AdamW<float> opt({.lr = 3e-4}, m.size());
  train_step(m, opt, {{9, 1, 2, 3, 10}, {9, 4, 10}});
  save_checkpoint(path, m, opt);
  Model<float> m2;
  AdamW<float> o2;
  load_checkpoint(path, m2, o2);
  CHECK(m2 == m);
  CHECK(o2 == opt);

  Model<double> wrong;
  AdamW<double> wo;
  CHECK_THROWS_AS(load_checkpoint(path, wrong, wo), std::runtime_error);

  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 5);
  CHECK_THROWS_AS(load_checkpoint(path, m2, o2), std::runtime_error);
  std::filesystem::remove(path);
}
