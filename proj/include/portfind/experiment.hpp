#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "portfind/finder.hpp"
#include "portfind/sim.hpp"

namespace portfind {

// Case-study harness: simulate a multi-currency world once, then query the
// finder with the true portfolios of randomly chosen users over random
// currency subsets of each size in m_values.
struct ExperimentConfig {
  SimConfig sim;
  std::vector<int> m_values;     // subset sizes to sweep, each in [1, m]
  int64_t queries_per_m = 1;
  int64_t snapshot_time = 0;     // in [0, sim.turns]
  Fixed score_threshold;
  uint64_t seed = 0;             // query sampling; independent of sim.seed
  int64_t max_resamples = 64;    // retries when a drawn user holds a zero balance
};

inline constexpr int kHistogramBins = 20;  // equal-width bins over [0,1]

struct QueryRow {
  int m = 0;
  int64_t query_id = 0;   // 1-based within its m
  bool skipped = false;   // resampling exhausted; counts as a miss
  bool hit = false;
  Fixed best_normalized;  // meaningful only when hit
  bool recovered = false; // best tuple == the queried user's accounts
};

struct MAggregate {
  int m = 0;
  int64_t queries = 0;
  int64_t misses = 0;   // includes skipped queries
  int64_t skipped = 0;
  int64_t hits = 0;
  int64_t recovered = 0;
  Fixed missing_rate;   // misses / queries
  std::optional<Fixed> mean_normalized;  // over hits; absent when there were none
  std::array<int64_t, kHistogramBins> histogram{};  // of normalized scores, hits only
};

struct ExperimentResult {
  std::vector<QueryRow> rows;         // query order
  std::vector<MAggregate> aggregates; // m_values order
};

void validate(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

// missing_rate.csv, scores_m<k>.csv, histogram_m<k>.csv and result.json.
// Identical config => byte-identical files.
void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                              const std::filesystem::path& out_dir);

}  // namespace portfind
