#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace overlap {

using Eigen::Index;

enum class DetectorKind { RollingAverage, AutoRegression, LevelShift };

std::string_view to_string(DetectorKind kind);
/// Short name used in file names: "ra", "ar", "ls".
std::string_view short_name(DetectorKind kind);

enum class ThresholdRule {
  MedianIqr,  // |x - median| > k * IQR
  MeanStd,    // |x - mean| > k * std
};

std::string_view to_string(ThresholdRule rule);

struct DetectorParams {
  DetectorKind kind{DetectorKind::AutoRegression};
  Index order_p{10};
  Index window_w{10};
  double threshold_k{3.0};
  ThresholdRule rule{ThresholdRule::MedianIqr};

  static DetectorParams autoregression(Index p = 10, double k = 3.0);
  static DetectorParams level_shift(Index w = 5, double k = 6.0);
  static DetectorParams rolling_average(Index w = 10, double k = 3.0);

  void check() const;

  bool operator==(const DetectorParams&) const = default;
};

struct AnomalySet {
  std::string series_name;
  DetectorParams params;
  std::vector<Index> flagged;  // ascending sample indices
  std::vector<double> scores;  // |score - center| for each flagged index

  std::size_t size() const noexcept { return flagged.size(); }

  bool operator==(const AnomalySet&) const = default;
};

/// Per-index scores starting at series index `offset`.
struct Residuals {
  Index offset{0};
  Eigen::VectorXd values;
};

struct ArFit {
  Eigen::VectorXd coefficients;  // intercept, then lags 1..p
  Residuals residuals;
};

/// Global least-squares AR(p) fit with intercept over t = p..n-1.
ArFit fit_autoregression(const Eigen::Ref<const Eigen::VectorXd>& values, Index p);
Residuals fit_ar_predict(const Eigen::Ref<const Eigen::VectorXd>& values, Index p);

/// |median(s[t-w..t-1]) - median(s[t..t+w-1])| for w <= t <= n-w.
Residuals level_shift_scores(const Eigen::Ref<const Eigen::VectorXd>& values, Index w);

/// y_t - mean(s[t-w..t-1]) for t >= w.
Residuals rolling_average_residuals(const Eigen::Ref<const Eigen::VectorXd>& values, Index w);

struct OutlierFlags {
  std::vector<Index> positions;  // into the score vector
  std::vector<double> deviations;
  double center{0.0};
  double scale{0.0};
  bool used_fallback{false};
};

/// Thresholds deviations from the center. Deviations at or below
/// `noise_floor` are never flagged. When the rule's spread is within the
/// noise floor, the mean absolute deviation is used as the scale instead.
OutlierFlags flag_outliers(const Eigen::Ref<const Eigen::VectorXd>& scores, double k,
                           ThresholdRule rule, double noise_floor);

/// Residuals smaller than this fraction of max|value| are rounding noise.
constexpr double kRelativeNoiseFloor = 1e-10;

double noise_floor_for(const Eigen::Ref<const Eigen::VectorXd>& values);

AnomalySet detect_autoregression(const Eigen::Ref<const Eigen::VectorXd>& values, Index p,
                                 double k, ThresholdRule rule = ThresholdRule::MedianIqr);
AnomalySet detect_level_shift(const Eigen::Ref<const Eigen::VectorXd>& values, Index w, double k,
                              ThresholdRule rule = ThresholdRule::MedianIqr);
AnomalySet detect_rolling_average(const Eigen::Ref<const Eigen::VectorXd>& values, Index w,
                                  double k, ThresholdRule rule = ThresholdRule::MedianIqr);

AnomalySet run_detector(const DetectorParams& params, const Eigen::Ref<const Eigen::VectorXd>& values,
                        std::string series_name = {});

}  // namespace overlap
