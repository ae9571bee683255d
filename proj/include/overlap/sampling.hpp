#pragma once

#include "overlap/time_series.hpp"

#include <cstddef>
#include <string>

namespace overlap {

enum class SamplingKind { StepSize, FirstN, DateRange };

std::string_view to_string(SamplingKind kind);

/// How a series is reduced before DTW. Step fields are chosen per system:
/// HIST series use `hist_step`, ION series use `ion_step`.
struct SamplingRecipe {
  SamplingKind kind{SamplingKind::StepSize};
  std::size_t hist_step{1};
  std::size_t ion_step{1};
  std::size_t n_points{1};
  Timestamp range_start{};
  Timestamp range_end{};

  static SamplingRecipe step(std::size_t hist_step, std::size_t ion_step);
  static SamplingRecipe first_n(std::size_t n);
  static SamplingRecipe date_range(Timestamp start, Timestamp end, std::size_t hist_step,
                                   std::size_t ion_step);
  /// Step 1 on both systems: no reduction.
  static SamplingRecipe passthrough() { return step(1, 1); }

  /// Throws if a field the kind relies on violates its invariant.
  void check() const;

  TimeSeries apply(const TimeSeries& s) const;

  bool operator==(const SamplingRecipe&) const = default;
};

/// Samples at indices 0, k, 2k, ...
TimeSeries sample_step(const TimeSeries& s, std::size_t k);

TimeSeries sample_first_n(const TimeSeries& s, std::size_t n);

TimeSeries sample_date_range(const TimeSeries& s, Timestamp start, Timestamp end, std::size_t k);

}  // namespace overlap
