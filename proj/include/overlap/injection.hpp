#pragma once

#include "overlap/detectors.hpp"
#include "overlap/time_series.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace overlap {

/// Deterministic random stream shared by the injectors and the synthetic
/// corpus generator. std::mt19937_64 output is fixed by the standard; the
/// transforms below are written out so draws do not depend on the standard
/// library's distribution implementations.
class SeededStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), rejection-sampled.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class InjectionKind { DosZeroRun, GaussianNoise };

std::string_view to_string(InjectionKind kind);
InjectionKind parse_injection_kind(std::string_view text);

struct InjectionLabel {
  InjectionKind kind{InjectionKind::DosZeroRun};
  std::string series_name;
  std::vector<Index> indices;  // ascending
  Timestamp window_start;
  Timestamp window_end;
  std::uint64_t seed{0};

  bool operator==(const InjectionLabel&) const = default;
};

struct Injection {
  TimeSeries series;
  InjectionLabel label;
};

constexpr std::int64_t kZeroRunMinMillis = 6000;
constexpr std::int64_t kZeroRunMaxMillis = 8000;

/// Zeroes every sample with at <= t <= at + duration. Without a duration,
/// one is drawn uniformly from [6000, 8000] ms using `seed`.
Injection inject_zero_run(const TimeSeries& s, Timestamp at,
                          std::optional<std::int64_t> duration_ms = std::nullopt,
                          std::uint64_t seed = 0);

/// Adds Normal(0, sigma^2) to `count` distinct, uniformly chosen samples.
Injection inject_gaussian_noise(const TimeSeries& s, std::size_t count, double sigma,
                                std::uint64_t seed);

struct EvalScore {
  std::int64_t true_positives{0};
  std::int64_t false_positives{0};
  std::int64_t false_negatives{0};
  double precision{1.0};
  double recall{1.0};
  double f1{1.0};

  bool operator==(const EvalScore&) const = default;
};

/// A labelled index is a hit when some detection lies within +-slack of it;
/// detections with no label within +-slack are false positives.
EvalScore evaluate(const AnomalySet& detected, const InjectionLabel& label, Index slack);

}  // namespace overlap
