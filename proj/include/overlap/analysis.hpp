#pragma once

#include "overlap/detectors.hpp"
#include "overlap/match.hpp"
#include "overlap/merge.hpp"
#include "overlap/time_series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace overlap {

enum class StdConvention { Population, Sample };

/// count/mean/std/min/max; everything but count is absent for an empty input.
struct SummaryStats {
  std::size_t count{0};
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<double> min;
  std::optional<double> max;

  bool operator==(const SummaryStats&) const = default;
};

/// Mean and spread use compensated summation.
SummaryStats describe(std::span<const double> values,
                      StdConvention convention = StdConvention::Population);
SummaryStats describe(const Eigen::Ref<const Eigen::VectorXd>& values,
                      StdConvention convention = StdConvention::Population);
SummaryStats describe(const TimeSeries& s, StdConvention convention = StdConvention::Population);
SummaryStats describe(const MergedSeries& s, StdConvention convention = StdConvention::Population);

/// 100 * (merged - individual_total) / individual_total. Throws
/// UndefinedBaseline when individual_total is zero.
double percent_change(std::int64_t individual_total, std::int64_t merged);

/// combined / single. Undefined (no ratio) when single is zero but combined
/// is not; `missed` then counts what the single view did not see.
struct CoverageRatio {
  std::optional<double> ratio;
  std::int64_t missed{0};

  bool defined() const noexcept { return ratio.has_value(); }
  bool operator==(const CoverageRatio&) const = default;
};

CoverageRatio coverage_ratio(std::int64_t single, std::int64_t combined);

struct DetectorComparison {
  DetectorKind kind{DetectorKind::RollingAverage};
  std::int64_t ion{0};
  std::int64_t hist{0};
  std::int64_t merged{0};
  std::optional<double> percent_change;  // merged vs ion + hist
  CoverageRatio ratio;                   // (ion + hist) vs ion alone
  CoverageRatio merged_ratio;            // merged vs ion alone
  bool merge_loss{false};                // merged < ion + hist

  bool operator==(const DetectorComparison&) const = default;
};

/// Anomaly sets of one pair, indexed by detector in report order RA, AR, LS.
struct PairDetections {
  std::array<AnomalySet, 3> ion;
  std::array<AnomalySet, 3> hist;
  std::array<AnomalySet, 3> merged;
};

constexpr std::array<DetectorKind, 3> kReportDetectorOrder = {
    DetectorKind::RollingAverage, DetectorKind::AutoRegression, DetectorKind::LevelShift};

struct ComparisonReport {
  std::string ion_name;
  std::string hist_name;
  std::size_t rank{0};
  double distance{0.0};
  std::array<DetectorComparison, 3> detectors;

  bool operator==(const ComparisonReport&) const = default;
};

DetectorComparison compare_counts(DetectorKind kind, std::int64_t ion, std::int64_t hist,
                                  std::int64_t merged);

ComparisonReport build_report(const MatchResult& pair, const PairDetections& detections);

}  // namespace overlap
