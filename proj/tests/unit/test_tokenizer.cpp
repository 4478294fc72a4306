#include <doctest.h>

#include <filesystem>

#include "patternboost/core/rng.hpp"
#include "patternboost/problems/problem.hpp"
#include "patternboost/problems/triangle.hpp"
#include "patternboost/tokenizer/bpe.hpp"
#include "patternboost/tokenizer/codec.hpp"
#include "patternboost/tokenizer/fixed_width.hpp"
#include "patternboost/tokenizer/flatten.hpp"

using namespace pb;
using namespace pb::tokenizer;

namespace {

std::vector<int> digits(const std::string& s) {
  std::vector<int> v;
  for (char c : s) v.push_back(c - '0');
  return v;
}

std::vector<int> random_bits(Rng& rng, std::size_t n) {
  std::vector<int> v(n);
  for (auto& b : v) b = static_cast<int>(uniform_index(rng, 2));
  return v;
}

}  // namespace

TEST_CASE("graph flattening") {
  auto g = problems::GraphBits::empty(3);
  g.set_edge(0, 1, true);
  g.set_edge(1, 2, true);
  CHECK(flatten_graph(g, {.delimiters = true, .include_diagonal = true}) == "010,01,0,");
  CHECK(flatten_graph(g, {.delimiters = false, .include_diagonal = true}) == "010010");
  CHECK(flatten_graph(g) == "101");
  CHECK(flatten_graph(g, {.delimiters = true}) == "10,1,");
  CHECK(flatten_graph(problems::GraphBits::empty(20)) == std::string(190, '0'));

  Rng rng = make_rng(1);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 12));
    auto h = problems::GraphBits::empty(n);
    for (auto& b : h.bits) b = static_cast<std::uint8_t>(uniform_index(rng, 2));
    for (bool delim : {false, true})
      for (bool diag : {false, true}) {
        const FlattenOptions opt{delim, diag};
        CHECK(unflatten_graph(flatten_graph(h, opt), n, opt) == h);
      }
  }
  CHECK_THROWS_AS(unflatten_graph("10,1", 3, {.delimiters = true}), DecodeError);
  CHECK_THROWS_AS(unflatten_graph("1,01,", 3, {.delimiters = true}), DecodeError);
  CHECK_THROWS_AS(unflatten_graph("110,01,0,", 3, {.delimiters = true, .include_diagonal = true}), DecodeError);
  CHECK_THROWS_AS(unflatten_graph("1x1", 3), DecodeError);
}

TEST_CASE("BPE golden corpus") {
  const std::vector<std::vector<int>> corpus = {digits("100001"), digits("110001"), digits("001001")};
  const auto one = bpe_train(corpus, {"0", "1"}, 3);
  REQUIRE(one.merges().size() == 1);
  CHECK(one.label(2) == "00");
  CHECK(bpe_encode(one, corpus[0]) == digits("1221"));
  CHECK(bpe_encode(one, corpus[1]) == digits("11201"));
  CHECK(bpe_encode(one, corpus[2]) == digits("2121"));

  const auto two = bpe_train(corpus, {"0", "1"}, 4);
  REQUIRE(two.merges().size() == 2);
  CHECK(two.merges()[1] == std::pair{1, 2});
  CHECK(two.label(3) == "100");
  CHECK(bpe_encode(two, corpus[0]) == digits("321"));
  CHECK(bpe_encode(two, corpus[1]) == digits("1301"));
  CHECK(bpe_encode(two, corpus[2]) == digits("231"));
}

TEST_CASE("BPE vocabulary edge cases") {
  const std::vector<std::vector<int>> corpus = {digits("0110"), digits("1010")};
  const auto v = bpe_train(corpus, {"0", "1"}, 2);
  CHECK(v.size() == 2);
  CHECK(bpe_encode(v, digits("0110")) == digits("0110"));
  CHECK_THROWS_AS(bpe_train({}, {"0", "1"}, 4), std::invalid_argument);
  CHECK_THROWS_AS(bpe_train({digits("012")}, {"0", "1"}, 4), std::invalid_argument);
  CHECK_THROWS_AS(bpe_train(corpus, {"0", "1"}, 1), std::invalid_argument);
  // No pair occurs twice: training stops early.
  CHECK(bpe_train({digits("01")}, {"0", "1"}, 50).size() == 2);
  CHECK_THROWS_AS(bpe_decode(v, {0, 7}), DecodeError);
}

TEST_CASE("BPE on triangle-free graphs round trips and never lengthens") {
  const auto problem = problems::make_problem(ProblemId::triangle, {.n = 20, .delimiters = false});
  Rng rng = make_rng(2);
  std::vector<std::vector<int>> corpus;
  for (int i = 0; i < 300; ++i) {
    const auto p = problem->local_search(problem->empty_start(), rng);
    corpus.push_back(problem->to_base(p));
  }
  const auto v = bpe_train(corpus, problem->base_labels(), 100);
  CHECK(v.size() == 100);
  bool ten = false;
  for (std::size_t t = v.base_count(); t < v.size(); ++t) ten = ten || v.label(static_cast<int>(t)) == "10";
  REQUIRE(ten);
  CHECK(bpe_encode(v, digits("10")).size() == 1);
  for (const auto& s : corpus) {
    const auto e = bpe_encode(v, s);
    CHECK(e.size() <= s.size());
    CHECK(bpe_decode(v, e) == s);
  }
  // Random strings over the same alphabet.
  const auto alphabet = problem->base_labels().size();
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> s(1 + uniform_index(rng, 60));
    for (auto& x : s) x = static_cast<int>(uniform_index(rng, alphabet));
    CHECK(bpe_decode(v, bpe_encode(v, s)) == s);
  }
}

TEST_CASE("fixed-width groups") {
  CHECK(fixed_width_encode(digits("00000001"), 8) == std::vector<int>{1});
  CHECK(fixed_width_encode(digits("11111111"), 8) == std::vector<int>{255});
  CHECK(fixed_width_encode(digits("101"), 2) == std::vector<int>{1, 1});
  Rng rng = make_rng(3);
  for (int t = 0; t < 500; ++t) {
    const int k = 1 + static_cast<int>(uniform_index(rng, kMaxFixedWidth));
    const auto bits = random_bits(rng, uniform_index(rng, 80));
    CHECK(fixed_width_decode(fixed_width_encode(bits, k), k, bits.size()) == bits);
  }
  CHECK_THROWS_AS(fixed_width_decode({1, 1}, 2, 5), DecodeError);
  CHECK_THROWS_AS(fixed_width_decode({4}, 2, 2), DecodeError);
  CHECK_THROWS_AS(fixed_width_decode({2, 0}, 2, 3), DecodeError);  // nonzero padding
  CHECK_THROWS_AS(fixed_width_encode({0, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(fixed_width_encode({0, 1}, 0), std::invalid_argument);
}

TEST_CASE("point indices") {
  CHECK(point_encode({0, 0, 0}, 7) == 0);
  CHECK(point_encode({1, 2, 3}, 10) == 123);
  CHECK(point_encode({4, 4, 4}, 5) == 124);
  for (int i = 0; i < 125; ++i) CHECK(point_encode(point_decode(i, 5), 5) == i);
  CHECK_THROWS_AS(point_encode({5, 0, 0}, 5), std::invalid_argument);
}

TEST_CASE("codecs round trip and save") {
  const auto dir = std::filesystem::temp_directory_path();
  Rng rng = make_rng(4);
  const std::vector<std::vector<int>> corpus = {digits("100001"), digits("110001"), digits("001001")};
  const std::vector<TokenCodec> codecs = {TokenCodec::identity({"0", "1"}), TokenCodec::fixed({"0", "1"}, 3, 6),
                                          TokenCodec::bpe(bpe_train(corpus, {"0", "1"}, 4))};
  for (const auto& c : codecs) {
    CAPTURE(to_string(c.kind()));
    CHECK(c.end_token() == c.start_token() + 1);
    CHECK(c.model_vocab() == c.content_tokens() + 2);
    for (int t = 0; t < 100; ++t) {
      const auto bits = random_bits(rng, 6);
      const auto e = c.encode(bits);
      for (int x : e) CHECK(x < static_cast<int>(c.content_tokens()));
      CHECK(c.decode(e) == bits);
    }
    CHECK_THROWS_AS(c.decode({c.start_token()}), DecodeError);
    const auto path = dir / "pb_codec.txt";
    c.save(path);
    CHECK(TokenCodec::load(path) == c);
    std::filesystem::remove(path);
  }
  CHECK(codecs[1].content_tokens() == 8);
  CHECK_THROWS_AS(codecs[1].decode({1}), DecodeError);  // 3 bits where 6 are expected
  CHECK(codec_from_string(to_string(CodecKind::bpe)) == CodecKind::bpe);
}
