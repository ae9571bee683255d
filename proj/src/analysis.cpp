#include "overlap/analysis.hpp"

#include "overlap/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace overlap {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_{0.0};
  double comp_{0.0};
};

}  // namespace

SummaryStats describe(std::span<const double> values, StdConvention convention) {
  SummaryStats out;
  out.count = values.size();
  if (values.empty()) return out;

  CompensatedSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(values.size());

  CompensatedSum squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  double denom = static_cast<double>(values.size());
  if (convention == StdConvention::Sample) denom -= 1.0;
  const double var = denom > 0.0 ? squares.value() / denom : 0.0;

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.mean = std::clamp(mean, *lo, *hi);
  out.std = std::sqrt(std::max(var, 0.0));
  out.min = *lo;
  out.max = *hi;
  return out;
}

SummaryStats describe(const Eigen::Ref<const Eigen::VectorXd>& values, StdConvention convention) {
  const Eigen::VectorXd v = values;
  return describe(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                  convention);
}

SummaryStats describe(const TimeSeries& s, StdConvention convention) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& sample : s.samples) v.push_back(sample.v);
  return describe(std::span<const double>(v), convention);
}

SummaryStats describe(const MergedSeries& s, StdConvention convention) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& sample : s.samples) v.push_back(sample.v);
  return describe(std::span<const double>(v), convention);
}

double percent_change(std::int64_t individual_total, std::int64_t merged) {
  if (individual_total <= 0) {
    throw Error(ErrorCode::UndefinedBaseline, "percent change needs a positive baseline count");
  }
  return 100.0 * static_cast<double>(merged - individual_total) /
         static_cast<double>(individual_total);
}

CoverageRatio coverage_ratio(std::int64_t single, std::int64_t combined) {
  if (single > 0) {
    return {static_cast<double>(combined) / static_cast<double>(single), 0};
  }
  if (combined == 0) return {1.0, 0};
  return {std::nullopt, combined};
}

DetectorComparison compare_counts(DetectorKind kind, std::int64_t ion, std::int64_t hist,
                                  std::int64_t merged) {
  DetectorComparison row;
  row.kind = kind;
  row.ion = ion;
  row.hist = hist;
  row.merged = merged;
  const std::int64_t individual = ion + hist;
  if (individual > 0) row.percent_change = percent_change(individual, merged);
  row.ratio = coverage_ratio(ion, individual);
  row.merged_ratio = coverage_ratio(ion, merged);
  row.merge_loss = merged < individual;
  return row;
}

ComparisonReport build_report(const MatchResult& pair, const PairDetections& detections) {
  ComparisonReport report;
  report.ion_name = pair.ion_id.name;
  report.hist_name = pair.hist_id.name;
  report.rank = pair.rank;
  report.distance = pair.distance;
  for (std::size_t d = 0; d < kReportDetectorOrder.size(); ++d) {
    report.detectors[d] = compare_counts(kReportDetectorOrder[d],
                                         static_cast<std::int64_t>(detections.ion[d].size()),
                                         static_cast<std::int64_t>(detections.hist[d].size()),
                                         static_cast<std::int64_t>(detections.merged[d].size()));
  }
  return report;
}

}  // namespace overlap
