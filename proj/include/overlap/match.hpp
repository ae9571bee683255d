#pragma once

#include "overlap/dtw.hpp"
#include "overlap/sampling.hpp"
#include "overlap/time_series.hpp"

#include <span>
#include <vector>

namespace overlap {

struct MatchResult {
  MeasurementId ion_id;
  MeasurementId hist_id;
  double distance{0.0};
  SamplingRecipe recipe;
  std::size_t rank{0};  // 1-based
};

struct MatchOptions {
  Index radius{1};
  Metric metric{Metric::L2};
  bool z_normalize{false};
  unsigned threads{0};  // 0: hardware concurrency
};

struct MatchRun {
  std::vector<MatchResult> results;
  double elapsed_seconds{0.0};
};

/// DTW-ranks every ION x HIST pair on recipe-sampled series. Results are
/// sorted by distance, ties broken by (ion name, hist name).
MatchRun match_all(std::span<const TimeSeries> ion, std::span<const TimeSeries> hist,
                   const SamplingRecipe& recipe, const MatchOptions& options = {});

}  // namespace overlap
