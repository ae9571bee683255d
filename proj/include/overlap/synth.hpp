#pragma once

#include "overlap/ingestion.hpp"
#include "overlap/time_series.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace overlap {

/// Two-system corpus with known overlaps. Each overlapping pair shares one
/// daily load profile: the HIST series samples it at `hist_cadence_ms` and
/// carries `spikes` injected spikes, the ION series is the clean profile at
/// `ion_cadence_ms`. Extra HIST series follow unrelated profiles.
struct SynthConfig {
  std::int64_t start_ms{1'606'780'800'000};  // 2020-12-01T00:00:00Z
  std::int64_t duration_ms{31 * kMillisPerDay};
  std::int64_t hist_cadence_ms{5000};
  std::int64_t ion_cadence_ms{kMillisPerHour};
  std::size_t pairs{4};
  std::size_t extra_hist{4};
  std::size_t spikes{20};
  double spike_height{50.0};
  double amplitude_min{5.0};
  double amplitude_max{20.0};
  std::uint64_t seed{1};
};

/// level + amplitude * sin(2 pi t / day + phase)
struct LoadProfile {
  double level{0.0};
  double amplitude{0.0};
  double phase{0.0};

  double at(Timestamp t) const;
};

struct SynthCorpus {
  std::vector<TimeSeries> ion;
  std::vector<TimeSeries> hist;
  std::vector<std::pair<std::string, std::string>> overlaps;  // (ion name, hist name)
};

TimeSeries sample_profile(const MeasurementId& id, const LoadProfile& profile, Timestamp start,
                          std::int64_t duration_ms, std::int64_t cadence_ms);

/// Adds `count` spikes of +-height * (1 + U[0,1)) at distinct indices;
/// returns the spiked indices in ascending order.
std::vector<Index> add_spikes(TimeSeries& s, std::size_t count, double height, std::uint64_t seed);

SynthCorpus make_synthetic_corpus(const SynthConfig& config);

/// Writes one CSV per series plus manifest.json into `dir`; returns the
/// manifest path.
std::filesystem::path write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace overlap
