#include "overlap/ingestion.hpp"

#include "overlap/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace overlap {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(pos)));
      break;
    }
    cells.push_back(trim(line.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return cells;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !text.empty();
}

bool parse_digits(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return parse_number(text, out);
}

// Decimal seconds to millis without going through floating point.
bool parse_epoch_seconds(std::string_view text, std::int64_t& millis) {
  const auto dot = text.find('.');
  std::int64_t whole = 0;
  const auto int_part = text.substr(0, dot);
  const bool negative = !int_part.empty() && int_part.front() == '-';
  if (!parse_number(int_part, whole)) return false;
  std::int64_t frac = 0;
  if (dot != std::string_view::npos) {
    auto digits = text.substr(dot + 1);
    if (digits.empty()) return false;
    std::string padded(digits.substr(0, 3));
    padded.resize(3, '0');
    for (char c : digits) {
      if (c < '0' || c > '9') return false;
    }
    if (!parse_number(std::string_view(padded), frac)) return false;
  }
  millis = whole * kMillisPerSecond + (negative ? -frac : frac);
  return true;
}

bool parse_time_cell(std::string_view cell, TimeFormat format, Timestamp& out) {
  switch (format) {
    case TimeFormat::EpochMillis:
      return parse_number(cell, out.millis);
    case TimeFormat::EpochSeconds:
      return parse_epoch_seconds(cell, out.millis);
    case TimeFormat::Iso8601:
      try {
        out = parse_iso8601(cell);
        return true;
      } catch (const Error&) {
        return false;
      }
  }
  return false;
}

}  // namespace

std::string_view to_string(TimeFormat f) {
  switch (f) {
    case TimeFormat::EpochMillis: return "EPOCH_MILLIS";
    case TimeFormat::EpochSeconds: return "EPOCH_SECONDS";
    case TimeFormat::Iso8601: return "ISO8601";
  }
  return "EPOCH_MILLIS";
}

TimeFormat parse_time_format(std::string_view text) {
  if (text == "EPOCH_MILLIS") return TimeFormat::EpochMillis;
  if (text == "EPOCH_SECONDS") return TimeFormat::EpochSeconds;
  if (text == "ISO8601") return TimeFormat::Iso8601;
  throw Error(ErrorCode::InvalidManifest, "unknown time_format '" + std::string(text) + "'");
}

Timestamp parse_iso8601(std::string_view text) {
  const auto fail = [&] {
    return Error(ErrorCode::UnparseableTime, "'" + std::string(text) + "' is not ISO-8601");
  };
  text = trim(text);
  // YYYY-MM-DDTHH:MM:SS
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
    throw fail();
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), mo) ||
      !parse_digits(text.substr(8, 2), d) || !parse_digits(text.substr(11, 2), h) ||
      !parse_digits(text.substr(14, 2), mi) || !parse_digits(text.substr(17, 2), s)) {
    throw fail();
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw fail();

  std::size_t pos = 19;
  std::int64_t frac_ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    std::size_t end = pos + 1;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    if (end == pos + 1) throw fail();
    std::string padded(text.substr(pos + 1, std::min<std::size_t>(3, end - pos - 1)));
    padded.resize(3, '0');
    frac_ms = std::stoll(padded);
    pos = end;
  }
  std::int64_t offset_ms = 0;
  if (pos < text.size()) {
    const char zone = text[pos];
    if (zone == 'Z' && pos + 1 == text.size()) {
      // UTC
    } else if ((zone == '+' || zone == '-') && text.size() == pos + 6 && text[pos + 3] == ':') {
      int oh = 0, om = 0;
      if (!parse_digits(text.substr(pos + 1, 2), oh) ||
          !parse_digits(text.substr(pos + 4, 2), om)) {
        throw fail();
      }
      offset_ms = (oh * 60LL + om) * 60'000LL * (zone == '+' ? 1 : -1);
    } else {
      throw fail();
    }
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  const std::int64_t millis = days * kMillisPerDay + h * kMillisPerHour +
                              mi * 60'000LL + s * kMillisPerSecond + frac_ms - offset_ms;
  return Timestamp{millis};
}

ParsedSeries parse_csv(std::istream& in, const MeasurementId& id, const ColumnMap& columns,
                       TimeFormat time_format) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MissingColumn, columns.time_column + " (no header row)");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_row(line);
  const auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), std::string_view(name));
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t time_col = column_index(columns.time_column);
  const std::size_t value_col = column_index(columns.value_column);

  ParsedSeries out;
  out.series.id = id;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    const auto cell = [&](std::size_t c) {
      return c < cells.size() ? cells[c] : std::string_view{};
    };
    const auto value_text = cell(value_col);
    if (value_text.empty()) {
      ++out.skipped_rows;
      continue;
    }
    Timestamp t;
    if (!parse_time_cell(cell(time_col), time_format, t)) {
      throw Error(ErrorCode::UnparseableTime,
                  "row " + std::to_string(row) + ": '" + std::string(cell(time_col)) + "'", row);
    }
    double v = 0.0;
    if (!parse_number(value_text, v)) {
      throw Error(ErrorCode::UnparseableValue,
                  "row " + std::to_string(row) + ": '" + std::string(value_text) + "'", row);
    }
    out.series.samples.push_back({t, v});
  }
  out.series = validate_series(std::move(out.series));
  return out;
}

ParsedSeries parse_csv(std::string_view text, const MeasurementId& id, const ColumnMap& columns,
                       TimeFormat time_format) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, id, columns, time_format);
}

void write_csv(std::ostream& out, const TimeSeries& s) {
  out << "timestamp,value\n";
  char buf[64];
  for (const auto& sample : s.samples) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, sample.v);
    out << sample.t.millis << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
        << '\n';
  }
}

std::string to_csv(const TimeSeries& s) {
  std::ostringstream out;
  write_csv(out, s);
  return out.str();
}

CorpusManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidManifest, e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::InvalidManifest, "expected an object with an \"entries\" array");
  }
  CorpusManifest manifest;
  std::set<MeasurementId> seen;
  for (const auto& e : doc["entries"]) {
    try {
      ManifestEntry entry;
      const auto system = e.at("system").get<std::string>();
      try {
        entry.id.system = parse_system_tag(system);
      } catch (const Error&) {
        throw Error(ErrorCode::InvalidManifest, "unknown system '" + system + "'");
      }
      entry.id.name = e.at("name").get<std::string>();
      const auto path = e.at("path").get<std::string>();
      if (entry.id.name.empty()) throw Error(ErrorCode::InvalidManifest, "empty name");
      if (path.empty()) throw Error(ErrorCode::InvalidManifest, "empty path for " + entry.id.name);
      entry.path = std::filesystem::path(path);
      if (entry.path.is_relative() && !base_dir.empty()) entry.path = base_dir / entry.path;
      entry.columns.time_column = e.value("time_column", std::string("timestamp"));
      entry.columns.value_column = e.value("value_column", std::string("value"));
      entry.time_format = parse_time_format(e.value("time_format", std::string("EPOCH_MILLIS")));
      if (!seen.insert(entry.id).second) {
        throw Error(ErrorCode::DuplicateId,
                    std::string(to_string(entry.id.system)) + " " + entry.id.name);
      }
      manifest.entries.push_back(std::move(entry));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::InvalidManifest, ex.what());
    }
  }
  return manifest;
}

CorpusManifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str(), file.parent_path());
}

std::string manifest_to_json(const CorpusManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    doc["entries"].push_back({{"system", to_string(e.id.system)},
                              {"name", e.id.name},
                              {"path", e.path.generic_string()},
                              {"time_column", e.columns.time_column},
                              {"value_column", e.columns.value_column},
                              {"time_format", to_string(e.time_format)}});
  }
  return doc.dump(2) + "\n";
}

void Corpus::insert(TimeSeries series) {
  auto id = series.id;
  if (!series_.emplace(id, std::move(series)).second) {
    throw Error(ErrorCode::DuplicateId, std::string(to_string(id.system)) + " " + id.name);
  }
}

std::vector<TimeSeries> Corpus::partition(SystemTag tag) const {
  std::vector<TimeSeries> out;
  for (const auto& [id, s] : series_) {
    if (id.system == tag) out.push_back(s);
  }
  return out;
}

std::size_t Corpus::count(SystemTag tag) const {
  return static_cast<std::size_t>(std::count_if(
      series_.begin(), series_.end(), [&](const auto& kv) { return kv.first.system == tag; }));
}

const TimeSeries& Corpus::find(std::string_view name) const {
  for (const auto& [id, s] : series_) {
    if (id.name == name) return s;
  }
  std::string available;
  for (const auto& n : names()) available += (available.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::UnknownSeries,
              "no series named '" + std::string(name) + "'; available: " + available);
}

std::vector<std::string> Corpus::names() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : series_) out.push_back(id.name);
  return out;
}

LoadResult load_corpus(const CorpusManifest& manifest) {
  LoadResult result;
  std::set<MeasurementId> seen;
  for (const auto& entry : manifest.entries) {
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  std::string(to_string(entry.id.system)) + " " + entry.id.name);
    }
  }
  for (const auto& entry : manifest.entries) {
    std::ifstream in(entry.path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, entry.path.string());
    ParsedSeries parsed;
    try {
      parsed = parse_csv(in, entry.id, entry.columns, entry.time_format);
    } catch (const Error& e) {
      throw Error(e.code(), entry.id.name + " (" + entry.path.string() + "): " + e.what(),
                  e.where());
    }
    if (parsed.skipped_rows > 0) {
      result.warnings.push_back(entry.id.name + ": skipped " +
                                std::to_string(parsed.skipped_rows) + " rows with blank values");
    }
    if (parsed.series.empty()) result.warnings.push_back(entry.id.name + ": empty series");
    result.entries.push_back({entry.id, parsed.series.size(), parsed.skipped_rows});
    result.corpus.insert(std::move(parsed.series));
  }
  return result;
}

}  // namespace overlap
