#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "patternboost/loop/loop.hpp"

namespace pb::cli {

/// Defaults for a problem: the published settings where known, desk-scale
/// values elsewhere.
loop::RunConfig default_config(ProblemId id);

/// Flat `key = value` lines, optional `[section]` headers, `#` comments. `problem`
/// selects the defaults; every other key overrides one field. Overrides are
/// `key=value` strings applied after the text. Throws std::invalid_argument naming the
/// source line for unknown keys, bad values, or an invalid resulting config.
loop::RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                                  const std::string& source = "<config>");
loop::RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Every field, grouped in sections; parse_config_text(echo_config(c)) == c.
std::string echo_config(const loop::RunConfig& c);

/// Applies the PATTERNBOOST_SEED environment variable when set.
void apply_seed_env(loop::RunConfig& c);

}  // namespace pb::cli
