#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <vector>

#include "patternboost/core/construction.hpp"

namespace pb::loop {

/// What one generation did. Generation 0 is the seed phase.
struct GenerationStats {
  int generation = 0;
  std::size_t samples = 0;        // sequences drawn (seed phase: local searches run)
  std::size_t invalid = 0;        // samples that did not decode
  std::size_t valid = 0;          // samples - invalid
  std::size_t local_searches = 0; // cumulative over the run
  std::map<Score, std::size_t> histogram;  // distinct new constructions per score
  std::size_t pool_size = 0;
  Score pool_best = 0;
  double pool_mean = 0;
  double train_loss = 0;          // mean per-token loss over the generation's last window

  std::size_t distinct() const;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

/// CSV rows `generation,score,count`, generations ascending and scores ascending.
/// Throws std::invalid_argument on an empty series.
void histogram_emit(const std::vector<GenerationStats>& series, const std::filesystem::path& path);

/// One row per generation with the scalar fields.
void summary_emit(const std::vector<GenerationStats>& series, const std::filesystem::path& path);

/// Reads the two files back into a series.
std::vector<GenerationStats> read_stats(const std::filesystem::path& histogram_csv,
                                        const std::filesystem::path& summary_csv);

/// Score with the highest count (ties to the higher score) in a histogram.
Score modal_score(const std::map<Score, std::size_t>& histogram);

}  // namespace pb::loop
