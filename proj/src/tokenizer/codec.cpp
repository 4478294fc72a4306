#include "patternboost/tokenizer/codec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "patternboost/tokenizer/fixed_width.hpp"
#include "patternboost/tokenizer/flatten.hpp"

namespace pb::tokenizer {

std::string_view to_string(CodecKind k) {
  switch (k) {
    case CodecKind::identity: return "identity";
    case CodecKind::fixed: return "fixed";
    case CodecKind::bpe: return "bpe";
  }
  return "?";
}

CodecKind codec_from_string(std::string_view s) {
  if (s == "identity") return CodecKind::identity;
  if (s == "fixed") return CodecKind::fixed;
  if (s == "bpe") return CodecKind::bpe;
  throw std::invalid_argument("unknown tokenizer '" + std::string(s) + "' (expected identity, fixed or bpe)");
}

TokenCodec TokenCodec::identity(std::vector<std::string> base_labels) {
  TokenCodec c;
  c.kind_ = CodecKind::identity;
  c.vocab_ = Vocab(std::move(base_labels));
  return c;
}

TokenCodec TokenCodec::fixed(std::vector<std::string> base_labels, int k, std::size_t length) {
  if (base_labels.size() != 2) throw std::invalid_argument("fixed-width tokens need a binary stream");
  if (k < 1 || k > kMaxFixedWidth) throw std::invalid_argument("fixed width must be in [1, 16]");
  TokenCodec c;
  c.kind_ = CodecKind::fixed;
  c.vocab_ = Vocab(std::move(base_labels));
  c.width_ = k;
  c.length_ = length;
  return c;
}

TokenCodec TokenCodec::bpe(Vocab v) {
  TokenCodec c;
  c.kind_ = CodecKind::bpe;
  c.vocab_ = std::move(v);
  return c;
}

std::size_t TokenCodec::content_tokens() const {
  if (kind_ == CodecKind::fixed) return std::size_t{1} << width_;
  return vocab_.size();
}

std::vector<int> TokenCodec::encode(const std::vector<int>& base) const {
  switch (kind_) {
    case CodecKind::identity:
      for (int b : base)
        if (b < 0 || static_cast<std::size_t>(b) >= vocab_.base_count())
          throw std::invalid_argument("symbol " + std::to_string(b) + " outside the base alphabet");
      return base;
    case CodecKind::fixed:
      if (base.size() != length_)
        throw std::invalid_argument("fixed-width stream has length " + std::to_string(base.size()) + ", expected " +
                                    std::to_string(length_));
      return fixed_width_encode(base, width_);
    case CodecKind::bpe: return bpe_encode(vocab_, base);
  }
  return {};
}

std::vector<int> TokenCodec::decode(const std::vector<int>& tokens) const {
  switch (kind_) {
    case CodecKind::identity:
      for (int t : tokens)
        if (t < 0 || static_cast<std::size_t>(t) >= vocab_.base_count())
          throw DecodeError("token " + std::to_string(t) + " not in the vocabulary");
      return tokens;
    case CodecKind::fixed: return fixed_width_decode(tokens, width_, length_);
    case CodecKind::bpe: return bpe_decode(vocab_, tokens);
  }
  return {};
}

void TokenCodec::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "patternboost-vocab v1\n";
  out << "codec " << to_string(kind_) << '\n';
  if (kind_ == CodecKind::fixed) out << "width " << width_ << ' ' << length_ << '\n';
  vocab_.write(out);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

TokenCodec TokenCodec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "patternboost-vocab v1")
    throw std::runtime_error(path.string() + ":1: not a patternboost vocabulary");
  if (!std::getline(in, line) || line.rfind("codec ", 0) != 0)
    throw std::runtime_error(path.string() + ":2: missing codec line");
  TokenCodec c;
  c.kind_ = codec_from_string(line.substr(6));
  if (c.kind_ == CodecKind::fixed) {
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ":3: missing width line");
    std::istringstream ws(line);
    std::string word;
    if (!(ws >> word >> c.width_ >> c.length_) || word != "width")
      throw std::runtime_error(path.string() + ":3: malformed width line");
  }
  try {
    c.vocab_ = Vocab::read(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (c.kind_ != CodecKind::bpe && !c.vocab_.merges().empty())
    throw std::runtime_error(path.string() + ": merges listed for a " + std::string(to_string(c.kind_)) + " codec");
  return c;
}

}  // namespace pb::tokenizer
