#include "patternboost/loop/stats.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pb::loop {

namespace {

std::string exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

constexpr const char* kSummaryHeader =
    "generation,samples,invalid,valid,distinct,local_searches,pool_size,pool_best,pool_mean,train_loss";

}  // namespace

std::size_t GenerationStats::distinct() const {
  std::size_t n = 0;
  for (const auto& [s, c] : histogram) n += c;
  return n;
}

void histogram_emit(const std::vector<GenerationStats>& series, const std::filesystem::path& path) {
  if (series.empty()) throw std::invalid_argument("histogram_emit: empty stats series");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "generation,score,count\n";
  for (const auto& g : series)
    for (const auto& [score, count] : g.histogram) out << g.generation << ',' << score << ',' << count << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void summary_emit(const std::vector<GenerationStats>& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kSummaryHeader << '\n';
  for (const auto& g : series)
    out << g.generation << ',' << g.samples << ',' << g.invalid << ',' << g.valid << ',' << g.distinct() << ','
        << g.local_searches << ',' << g.pool_size << ',' << g.pool_best << ',' << exact(g.pool_mean) << ','
        << exact(g.train_loss) << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<GenerationStats> read_stats(const std::filesystem::path& histogram_csv,
                                        const std::filesystem::path& summary_csv) {
  std::vector<GenerationStats> series;
  std::ifstream sum(summary_csv);
  if (!sum) throw std::runtime_error("cannot read " + summary_csv.string());
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(sum, line) || line != kSummaryHeader)
    throw std::runtime_error(summary_csv.string() + ":1: unexpected header");
  while (std::getline(sum, line)) {
    ++lineno;
    auto f = split(line);
    if (f.size() != 10) throw std::runtime_error(summary_csv.string() + ":" + std::to_string(lineno) + ": expected 10 fields");
    GenerationStats g;
    g.generation = std::stoi(f[0]);
    g.samples = std::stoull(f[1]);
    g.invalid = std::stoull(f[2]);
    g.valid = std::stoull(f[3]);
    g.local_searches = std::stoull(f[5]);
    g.pool_size = std::stoull(f[6]);
    g.pool_best = std::stoll(f[7]);
    g.pool_mean = std::stod(f[8]);
    g.train_loss = std::stod(f[9]);
    series.push_back(g);
  }
  std::ifstream hist(histogram_csv);
  if (!hist) throw std::runtime_error("cannot read " + histogram_csv.string());
  lineno = 1;
  if (!std::getline(hist, line) || line != "generation,score,count")
    throw std::runtime_error(histogram_csv.string() + ":1: unexpected header");
  while (std::getline(hist, line)) {
    ++lineno;
    auto f = split(line);
    if (f.size() != 3) throw std::runtime_error(histogram_csv.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
    const int gen = std::stoi(f[0]);
    GenerationStats* g = nullptr;
    for (auto& s : series)
      if (s.generation == gen) g = &s;
    if (!g)
      throw std::runtime_error(histogram_csv.string() + ":" + std::to_string(lineno) + ": generation " + f[0] +
                               " missing from the summary");
    g->histogram[std::stoll(f[1])] = std::stoull(f[2]);
  }
  return series;
}

Score modal_score(const std::map<Score, std::size_t>& histogram) {
  if (histogram.empty()) throw std::invalid_argument("modal_score: empty histogram");
  Score best = histogram.begin()->first;
  std::size_t count = 0;
  for (const auto& [s, c] : histogram)
    if (c >= count) {
      best = s;
      count = c;
    }
  return best;
}

}  // namespace pb::loop
