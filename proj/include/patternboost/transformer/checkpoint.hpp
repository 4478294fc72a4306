#pragma once

#include <filesystem>

#include "patternboost/transformer/model.hpp"

namespace pb::transformer {

/// Text header line with the config, optimizer settings and precision, then raw
/// little-endian parameters, Adam moments and the step counter. Round trips bitwise.
template <class T>
void save_checkpoint(const std::filesystem::path& path, const Model<T>& model, const AdamW<T>& opt);

/// Throws std::runtime_error on a malformed header, a precision mismatch or a short file.
template <class T>
void load_checkpoint(const std::filesystem::path& path, Model<T>& model, AdamW<T>& opt);

}  // namespace pb::transformer
