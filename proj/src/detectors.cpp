#include "overlap/detectors.hpp"

#include "overlap/error.hpp"
#include "overlap/robust.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace overlap {

namespace {

// Median of a contiguous window, reusing `buf`. Same arithmetic as
// overlap::median.
double window_median(const double* first, Index w, std::vector<double>& buf) {
  buf.assign(first, first + w);
  const auto mid = buf.begin() + w / 2;
  std::nth_element(buf.begin(), mid, buf.end());
  if (w % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(buf.begin(), mid);
  return (lower + upper) / 2.0;
}

AnomalySet to_anomaly_set(const Residuals& r, double k, ThresholdRule rule, double floor) {
  AnomalySet out;
  if (r.values.size() == 0) return out;
  const auto flags = flag_outliers(r.values, k, rule, floor);
  out.flagged.reserve(flags.positions.size());
  for (const Index pos : flags.positions) out.flagged.push_back(pos + r.offset);
  out.scores = flags.deviations;
  return out;
}

}  // namespace

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::RollingAverage: return "rolling_average";
    case DetectorKind::AutoRegression: return "autoregression";
    case DetectorKind::LevelShift: return "level_shift";
  }
  return "autoregression";
}

std::string_view short_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::RollingAverage: return "ra";
    case DetectorKind::AutoRegression: return "ar";
    case DetectorKind::LevelShift: return "ls";
  }
  return "ar";
}

std::string_view to_string(ThresholdRule rule) {
  return rule == ThresholdRule::MedianIqr ? "median_iqr" : "mean_std";
}

DetectorParams DetectorParams::autoregression(Index p, double k) {
  return {DetectorKind::AutoRegression, p, 10, k, ThresholdRule::MedianIqr};
}

DetectorParams DetectorParams::level_shift(Index w, double k) {
  return {DetectorKind::LevelShift, 10, w, k, ThresholdRule::MedianIqr};
}

DetectorParams DetectorParams::rolling_average(Index w, double k) {
  return {DetectorKind::RollingAverage, 10, w, k, ThresholdRule::MedianIqr};
}

void DetectorParams::check() const {
  if (order_p < 1) throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
  if (window_w < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  if (!(threshold_k > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold k must be > 0");
}

ArFit fit_autoregression(const Eigen::Ref<const Eigen::VectorXd>& values, Index p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
  const Index n = values.size();
  if (n <= p) {
    throw Error(ErrorCode::TooShort,
                "AR(" + std::to_string(p) + ") needs more than " + std::to_string(p) + " points");
  }
  const Index rows = n - p;
  ArFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p + 1);
  fit.residuals.offset = p;

  // Center and scale so the rank decision below is independent of the
  // series' offset and units.
  const double mean = values.mean();
  const double spread = (values.array() - mean).abs().maxCoeff();
  if (spread == 0.0) {
    fit.coefficients[0] = mean;
    fit.residuals.values = Eigen::VectorXd::Zero(rows);
    return fit;
  }
  const Eigen::VectorXd z = (values.array() - mean) / spread;

  Eigen::MatrixXd design(rows, p + 1);
  design.col(0).setOnes();
  for (Index lag = 1; lag <= p; ++lag) design.col(lag) = z.segment(p - lag, rows);
  const Eigen::VectorXd target = z.segment(p, rows);

  // Rank-revealing solve: straight lines and constants give rank-deficient
  // designs, where this returns the minimum-norm least-squares fit.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(design);
  const Eigen::VectorXd c = cod.solve(target);

  fit.residuals.values = (target - design * c) * spread;

  // Map coefficients back to the original units.
  fit.coefficients = c;
  fit.coefficients[0] = c[0] * spread + mean * (1.0 - c.tail(p).sum());
  return fit;
}

Residuals fit_ar_predict(const Eigen::Ref<const Eigen::VectorXd>& values, Index p) {
  return fit_autoregression(values, p).residuals;
}

Residuals level_shift_scores(const Eigen::Ref<const Eigen::VectorXd>& values, Index w) {
  if (w < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  const Index n = values.size();
  if (n < 2 * w) {
    throw Error(ErrorCode::TooShort, "level shift with window " + std::to_string(w) +
                                         " needs at least " + std::to_string(2 * w) + " points");
  }
  const Eigen::VectorXd v = values;
  Residuals out;
  out.offset = w;
  out.values.resize(n - 2 * w + 1);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(w));
  for (Index t = w; t <= n - w; ++t) {
    const double before = window_median(v.data() + (t - w), w, buf);
    const double after = window_median(v.data() + t, w, buf);
    out.values[t - w] = std::abs(before - after);
  }
  return out;
}

Residuals rolling_average_residuals(const Eigen::Ref<const Eigen::VectorXd>& values, Index w) {
  if (w < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  const Index n = values.size();
  if (n <= w) {
    throw Error(ErrorCode::TooShort, "rolling average with window " + std::to_string(w) +
                                         " needs more than " + std::to_string(w) + " points");
  }
  Residuals out;
  out.offset = w;
  out.values.resize(n - w);
  for (Index t = w; t < n; ++t) {
    double sum = 0.0;
    for (Index i = t - w; i < t; ++i) sum += values[i];
    out.values[t - w] = values[t] - sum / static_cast<double>(w);
  }
  return out;
}

OutlierFlags flag_outliers(const Eigen::Ref<const Eigen::VectorXd>& scores, double k,
                           ThresholdRule rule, double noise_floor) {
  OutlierFlags out;
  if (scores.size() == 0) return out;
  if (rule == ThresholdRule::MedianIqr) {
    out.center = median(scores);
    out.scale = interquartile_range(scores);
  } else {
    out.center = scores.mean();
    out.scale = std::sqrt((scores.array() - out.center).square().mean());
  }
  const Eigen::ArrayXd deviation = (scores.array() - out.center).abs();
  if (!(out.scale > noise_floor)) {
    out.used_fallback = true;
    out.scale = deviation.mean();
  }
  const double limit = k * out.scale;
  for (Index t = 0; t < deviation.size(); ++t) {
    if (deviation[t] > limit && deviation[t] > noise_floor) {
      out.positions.push_back(t);
      out.deviations.push_back(deviation[t]);
    }
  }
  return out;
}

double noise_floor_for(const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) return 0.0;
  return kRelativeNoiseFloor * values.cwiseAbs().maxCoeff();
}

AnomalySet detect_autoregression(const Eigen::Ref<const Eigen::VectorXd>& values, Index p,
                                 double k, ThresholdRule rule) {
  auto params = DetectorParams::autoregression(p, k);
  params.rule = rule;
  params.check();
  auto out = to_anomaly_set(fit_ar_predict(values, p), k, rule, noise_floor_for(values));
  out.params = params;
  return out;
}

AnomalySet detect_level_shift(const Eigen::Ref<const Eigen::VectorXd>& values, Index w, double k,
                              ThresholdRule rule) {
  auto params = DetectorParams::level_shift(w, k);
  params.rule = rule;
  params.check();
  auto out = to_anomaly_set(level_shift_scores(values, w), k, rule, noise_floor_for(values));
  out.params = params;
  return out;
}

AnomalySet detect_rolling_average(const Eigen::Ref<const Eigen::VectorXd>& values, Index w,
                                  double k, ThresholdRule rule) {
  auto params = DetectorParams::rolling_average(w, k);
  params.rule = rule;
  params.check();
  auto out = to_anomaly_set(rolling_average_residuals(values, w), k, rule, noise_floor_for(values));
  out.params = params;
  return out;
}

AnomalySet run_detector(const DetectorParams& params, const Eigen::Ref<const Eigen::VectorXd>& values,
                        std::string series_name) {
  params.check();
  AnomalySet out;
  switch (params.kind) {
    case DetectorKind::AutoRegression:
      out = detect_autoregression(values, params.order_p, params.threshold_k, params.rule);
      break;
    case DetectorKind::LevelShift:
      out = detect_level_shift(values, params.window_w, params.threshold_k, params.rule);
      break;
    case DetectorKind::RollingAverage:
      out = detect_rolling_average(values, params.window_w, params.threshold_k, params.rule);
      break;
  }
  out.params = params;
  out.series_name = std::move(series_name);
  return out;
}

}  // namespace overlap
