#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace overlap {

using Eigen::Index;

/// Milliseconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t millis{0};

  constexpr auto operator<=>(const Timestamp&) const = default;
};

constexpr std::int64_t kMillisPerSecond = 1000;
constexpr std::int64_t kMillisPerHour = 3'600'000;
constexpr std::int64_t kMillisPerDay = 86'400'000;

enum class SystemTag { Ion, Hist };

std::string_view to_string(SystemTag tag);
SystemTag parse_system_tag(std::string_view text);

struct MeasurementId {
  SystemTag system{SystemTag::Ion};
  std::string name;

  auto operator<=>(const MeasurementId&) const = default;
};

struct Sample {
  Timestamp t;
  double v{0.0};

  bool operator==(const Sample&) const = default;
};

struct TimeSeries {
  MeasurementId id;
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  /// Values in index order, as a dense column vector.
  Eigen::VectorXd values() const;

  bool operator==(const TimeSeries&) const = default;
};

/// Stable-sorts by timestamp. Rejects NaN/Inf values and negative
/// timestamps; duplicate timestamps are kept.
TimeSeries validate_series(TimeSeries raw);

/// Samples with start <= t <= end, order preserved.
TimeSeries slice_by_range(const TimeSeries& s, Timestamp start, Timestamp end);

bool is_time_sorted(const TimeSeries& s);

}  // namespace overlap
