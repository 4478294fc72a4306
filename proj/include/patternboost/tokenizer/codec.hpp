#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patternboost/tokenizer/bpe.hpp"

namespace pb::tokenizer {

enum class CodecKind { identity, fixed, bpe };

std::string_view to_string(CodecKind k);
CodecKind codec_from_string(std::string_view s);

/// Reversible map between a problem's base-symbol stream and model tokens. Content
/// tokens are 0..content_tokens()-1; START and END follow them.
class TokenCodec {
 public:
  /// One token per base symbol.
  static TokenCodec identity(std::vector<std::string> base_labels);
  /// k-bit groups of a binary stream of fixed length.
  static TokenCodec fixed(std::vector<std::string> base_labels, int k, std::size_t length);
  static TokenCodec bpe(Vocab v);

  CodecKind kind() const { return kind_; }
  std::size_t content_tokens() const;
  int start_token() const { return static_cast<int>(content_tokens()); }
  int end_token() const { return static_cast<int>(content_tokens()) + 1; }
  /// Content tokens plus the two specials.
  std::size_t model_vocab() const { return content_tokens() + 2; }
  const Vocab& vocab() const { return vocab_; }

  /// Content tokens only, without specials.
  std::vector<int> encode(const std::vector<int>& base) const;
  /// Throws DecodeError on ids outside the content range or a malformed fixed stream.
  std::vector<int> decode(const std::vector<int>& tokens) const;

  /// Text file: `patternboost-vocab v1`, `codec <kind>`, optional `width <k> <length>`,
  /// then the base line and merges.
  void save(const std::filesystem::path& path) const;
  static TokenCodec load(const std::filesystem::path& path);

  friend bool operator==(const TokenCodec& a, const TokenCodec& b) {
    return a.kind_ == b.kind_ && a.vocab_ == b.vocab_ && a.width_ == b.width_ && a.length_ == b.length_;
  }

 private:
  CodecKind kind_ = CodecKind::identity;
  Vocab vocab_;
  int width_ = 0;
  std::size_t length_ = 0;
};

}  // namespace pb::tokenizer
