#pragma once

#include "overlap/time_series.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace overlap {

enum class TimeFormat { EpochMillis, EpochSeconds, Iso8601 };

std::string_view to_string(TimeFormat f);
TimeFormat parse_time_format(std::string_view text);

struct ColumnMap {
  std::string time_column{"timestamp"};
  std::string value_column{"value"};
};

struct ManifestEntry {
  MeasurementId id;
  std::filesystem::path path;
  ColumnMap columns;
  TimeFormat time_format{TimeFormat::EpochMillis};
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

/// Reads the manifest JSON document. Relative paths resolve against the
/// manifest's own directory.
CorpusManifest read_manifest(const std::filesystem::path& file);
CorpusManifest parse_manifest(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});
std::string manifest_to_json(const CorpusManifest& manifest);

struct ParsedSeries {
  TimeSeries series;
  std::size_t skipped_rows{0};  // rows with a blank value cell
};

/// Parses one series from CSV text with a header row.
ParsedSeries parse_csv(std::istream& in, const MeasurementId& id,
                       const ColumnMap& columns, TimeFormat time_format);
ParsedSeries parse_csv(std::string_view text, const MeasurementId& id,
                       const ColumnMap& columns, TimeFormat time_format);

/// Writes `timestamp,value` with epoch-millisecond timestamps and
/// shortest round-trip decimal values.
void write_csv(std::ostream& out, const TimeSeries& s);
std::string to_csv(const TimeSeries& s);

/// ISO-8601 UTC timestamp ("2020-12-01T00:00:05Z", optional fraction and
/// +hh:mm offset) to epoch millis.
Timestamp parse_iso8601(std::string_view text);

class Corpus {
 public:
  Corpus() = default;

  void insert(TimeSeries series);

  const std::map<MeasurementId, TimeSeries>& series() const noexcept { return series_; }
  std::size_t size() const noexcept { return series_.size(); }

  /// Copies of all series of one system, ordered by name.
  std::vector<TimeSeries> partition(SystemTag tag) const;
  std::size_t count(SystemTag tag) const;

  /// Looks a series up by name in either system.
  const TimeSeries& find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<MeasurementId, TimeSeries> series_;
};

struct EntryReport {
  MeasurementId id;
  std::size_t rows{0};
  std::size_t skipped_rows{0};
};

struct LoadResult {
  Corpus corpus;
  std::vector<EntryReport> entries;
  std::vector<std::string> warnings;
};

LoadResult load_corpus(const CorpusManifest& manifest);

}  // namespace overlap
