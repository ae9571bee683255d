#include "overlap/synth.hpp"

#include "overlap/error.hpp"
#include "overlap/injection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>

namespace overlap {

double LoadProfile::at(Timestamp t) const {
  const double day_fraction =
      static_cast<double>(t.millis % kMillisPerDay) / static_cast<double>(kMillisPerDay);
  return level + amplitude * std::sin(2.0 * std::numbers::pi * day_fraction + phase);
}

TimeSeries sample_profile(const MeasurementId& id, const LoadProfile& profile, Timestamp start,
                          std::int64_t duration_ms, std::int64_t cadence_ms) {
  if (cadence_ms <= 0) throw Error(ErrorCode::InvalidArgument, "cadence must be > 0 ms");
  TimeSeries s{id, {}};
  for (std::int64_t t = start.millis; t < start.millis + duration_ms; t += cadence_ms) {
    s.samples.push_back({Timestamp{t}, profile.at(Timestamp{t})});
  }
  return s;
}

std::vector<Index> add_spikes(TimeSeries& s, std::size_t count, double height, std::uint64_t seed) {
  if (count > s.size()) {
    throw Error(ErrorCode::TooFewSamples, "more spikes than samples in '" + s.id.name + "'");
  }
  SeededStream stream(seed);
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Index> spiked;
  for (std::size_t k = 0; k < count; ++k) {
    const auto pick = k + static_cast<std::size_t>(stream.below(order.size() - k));
    std::swap(order[k], order[pick]);
    const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
    s.samples[order[k]].v += sign * height * (1.0 + stream.uniform());
    spiked.push_back(static_cast<Index>(order[k]));
  }
  std::sort(spiked.begin(), spiked.end());
  return spiked;
}

SynthCorpus make_synthetic_corpus(const SynthConfig& config) {
  if (config.duration_ms <= 0) throw Error(ErrorCode::InvalidArgument, "duration must be > 0");
  if (config.amplitude_max < config.amplitude_min) {
    throw Error(ErrorCode::InvalidArgument, "amplitude range is empty");
  }
  SeededStream stream(config.seed);
  const Timestamp start{config.start_ms};
  const auto draw_profile = [&](double level) {
    LoadProfile p;
    p.level = level;
    p.amplitude =
        config.amplitude_min + (config.amplitude_max - config.amplitude_min) * stream.uniform();
    p.phase = 2.0 * std::numbers::pi * stream.uniform();
    return p;
  };

  // Names follow the "ION-<panel>-<meter>" / "HIST-<point>-S" pattern.
  std::set<std::uint64_t> used_hist;
  const auto hist_name = [&] {
    std::uint64_t n = 0;
    do {
      n = 10 + stream.below(90);
    } while (!used_hist.insert(n).second);
    return "HIST-" + std::to_string(n) + "-S";
  };

  SynthCorpus corpus;
  for (std::size_t k = 0; k < config.pairs; ++k) {
    const auto profile = draw_profile(100.0 * static_cast<double>(k + 1));
    const MeasurementId ion_id{SystemTag::Ion, "ION-" + std::to_string(k + 1) + "-" +
                                                   std::to_string(100 + stream.below(9900))};
    const MeasurementId hist_id{SystemTag::Hist, hist_name()};
    auto hist = sample_profile(hist_id, profile, start, config.duration_ms, config.hist_cadence_ms);
    add_spikes(hist, std::min(config.spikes, hist.size()), config.spike_height, stream.next());
    corpus.hist.push_back(std::move(hist));
    corpus.ion.push_back(
        sample_profile(ion_id, profile, start, config.duration_ms, config.ion_cadence_ms));
    corpus.overlaps.emplace_back(ion_id.name, hist_id.name);
  }
  for (std::size_t k = 0; k < config.extra_hist; ++k) {
    const auto profile = draw_profile(100.0 * static_cast<double>(config.pairs + k + 1) + 50.0);
    const MeasurementId hist_id{SystemTag::Hist, hist_name()};
    auto hist = sample_profile(hist_id, profile, start, config.duration_ms, config.hist_cadence_ms);
    add_spikes(hist, std::min(config.spikes, hist.size()), config.spike_height, stream.next());
    corpus.hist.push_back(std::move(hist));
  }
  return corpus;
}

std::filesystem::path write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  CorpusManifest manifest;
  const auto emit = [&](const TimeSeries& s) {
    const auto file = s.id.name + ".csv";
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, (dir / file).string());
    write_csv(out, s);
    if (!out) throw Error(ErrorCode::IoError, (dir / file).string());
    manifest.entries.push_back({s.id, file, ColumnMap{}, TimeFormat::EpochMillis});
  };
  for (const auto& s : corpus.ion) emit(s);
  for (const auto& s : corpus.hist) emit(s);
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, path.string());
  out << manifest_to_json(manifest);
  return path;
}

}  // namespace overlap
