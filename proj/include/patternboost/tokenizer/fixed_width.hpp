#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pb::tokenizer {

inline constexpr int kMaxFixedWidth = 16;

/// Groups of k bits read as binary numbers, most significant first. The stream is
/// left-padded with zeros to a multiple of k. Throws std::invalid_argument on a
/// non-bit symbol or k outside [1, kMaxFixedWidth].
std::vector<int> fixed_width_encode(const std::vector<int>& bits, int k);

/// Inverse for a stream of known length: throws DecodeError when the token count is
/// not ceil(length / k), a token exceeds 2^k - 1, or the padding is not zero.
std::vector<int> fixed_width_decode(const std::vector<int>& tokens, int k, std::size_t length);

/// (a0, a1, a2) -> a0 n^2 + a1 n + a2; throws std::invalid_argument outside [0, n).
int point_encode(std::array<int, 3> p, int n);
std::array<int, 3> point_decode(int index, int n);

}  // namespace pb::tokenizer
