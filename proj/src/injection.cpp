#include "overlap/injection.hpp"

#include "overlap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace overlap {

double SeededStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededStream::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

double SeededStream::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::string_view to_string(InjectionKind kind) {
  return kind == InjectionKind::DosZeroRun ? "DOS_ZERO_RUN" : "GAUSSIAN_NOISE";
}

InjectionKind parse_injection_kind(std::string_view text) {
  if (text == "DOS_ZERO_RUN" || text == "zero-run") return InjectionKind::DosZeroRun;
  if (text == "GAUSSIAN_NOISE" || text == "noise") return InjectionKind::GaussianNoise;
  throw Error(ErrorCode::InvalidArgument, "unknown injection kind '" + std::string(text) + "'");
}

Injection inject_zero_run(const TimeSeries& s, Timestamp at, std::optional<std::int64_t> duration_ms,
                          std::uint64_t seed) {
  if (s.empty()) throw Error(ErrorCode::EmptyInput, "cannot inject into an empty series");
  std::int64_t duration = 0;
  if (duration_ms) {
    duration = *duration_ms;
  } else {
    SeededStream stream(seed);
    duration = kZeroRunMinMillis + static_cast<std::int64_t>(stream.below(
                                       kZeroRunMaxMillis - kZeroRunMinMillis + 1));
  }
  if (duration <= 0) throw Error(ErrorCode::InvalidArgument, "duration must be > 0 ms");

  Injection out{s, {}};
  out.label.kind = InjectionKind::DosZeroRun;
  out.label.series_name = s.id.name;
  out.label.window_start = at;
  out.label.window_end = Timestamp{at.millis + duration};
  out.label.seed = seed;
  for (std::size_t k = 0; k < out.series.samples.size(); ++k) {
    auto& sample = out.series.samples[k];
    if (at <= sample.t && sample.t <= out.label.window_end) {
      sample.v = 0.0;
      out.label.indices.push_back(static_cast<Index>(k));
    }
  }
  if (out.label.indices.empty()) {
    throw Error(ErrorCode::EmptyWindow, "no samples of '" + s.id.name + "' in [" +
                                            std::to_string(at.millis) + ", " +
                                            std::to_string(out.label.window_end.millis) + "]");
  }
  return out;
}

Injection inject_gaussian_noise(const TimeSeries& s, std::size_t count, double sigma,
                                std::uint64_t seed) {
  if (s.empty()) throw Error(ErrorCode::EmptyInput, "cannot inject into an empty series");
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "noise count must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be finite and >= 0");
  }
  if (count > s.size()) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(count) + " noisy points requested, '" +
                                              s.id.name + "' has " + std::to_string(s.size()));
  }
  SeededStream stream(seed);

  // Partial Fisher-Yates: the first `count` slots are a uniform sample
  // without replacement.
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) {
    const auto pick = k + static_cast<std::size_t>(stream.below(order.size() - k));
    std::swap(order[k], order[pick]);
  }

  Injection out{s, {}};
  out.label.kind = InjectionKind::GaussianNoise;
  out.label.series_name = s.id.name;
  out.label.seed = seed;
  for (std::size_t k = 0; k < count; ++k) {
    const double z = stream.normal();
    if (sigma > 0.0) out.series.samples[order[k]].v += sigma * z;
    out.label.indices.push_back(static_cast<Index>(order[k]));
  }
  std::sort(out.label.indices.begin(), out.label.indices.end());
  out.label.window_start = s.samples[static_cast<std::size_t>(out.label.indices.front())].t;
  out.label.window_end = s.samples[static_cast<std::size_t>(out.label.indices.back())].t;
  return out;
}

EvalScore evaluate(const AnomalySet& detected, const InjectionLabel& label, Index slack) {
  if (!detected.series_name.empty() && !label.series_name.empty() &&
      detected.series_name != label.series_name) {
    throw Error(ErrorCode::SeriesMismatch,
                "detections on '" + detected.series_name + "', label on '" + label.series_name + "'");
  }
  if (slack < 0) throw Error(ErrorCode::InvalidArgument, "slack must be >= 0");

  std::vector<Index> found = detected.flagged;
  std::sort(found.begin(), found.end());
  std::vector<Index> truth = label.indices;
  std::sort(truth.begin(), truth.end());

  const auto any_within = [slack](const std::vector<Index>& sorted, Index x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - slack);
    return it != sorted.end() && *it <= x + slack;
  };

  EvalScore score;
  for (const Index t : truth) {
    if (any_within(found, t)) ++score.true_positives;
    else ++score.false_negatives;
  }
  for (const Index d : found) {
    if (!any_within(truth, d)) ++score.false_positives;
  }
  const auto tp = static_cast<double>(score.true_positives);
  const auto fp = static_cast<double>(score.false_positives);
  const auto fn = static_cast<double>(score.false_negatives);
  score.precision = (tp + fp) == 0.0 ? 1.0 : tp / (tp + fp);
  score.recall = (tp + fn) == 0.0 ? 1.0 : tp / (tp + fn);
  const double pr = score.precision + score.recall;
  score.f1 = pr == 0.0 ? 0.0 : 2.0 * score.precision * score.recall / pr;
  return score;
}

}  // namespace overlap
