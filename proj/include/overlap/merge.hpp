#pragma once

#include "overlap/time_series.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace overlap {

enum class Origin { FromIon, FromHist };

std::string_view to_string(Origin o);

/// Timestamp-sorted union of a matched ION/HIST pair. `origin[k]` records
/// which source sample k came from.
struct MergedSeries {
  std::string name;  // "<ion_name>+<hist_name>"
  MeasurementId ion_id;
  MeasurementId hist_id;
  std::vector<Sample> samples;
  std::vector<Origin> origin;

  std::size_t size() const noexcept { return samples.size(); }
  Eigen::VectorXd values() const;

  bool operator==(const MergedSeries&) const = default;
};

/// Lossless union: no resampling, no deduplication. On equal timestamps the
/// ION sample comes first.
MergedSeries merge_pair(const TimeSeries& ion, const TimeSeries& hist);

/// Inverse of merge_pair.
std::pair<TimeSeries, TimeSeries> split(const MergedSeries& merged);

}  // namespace overlap
