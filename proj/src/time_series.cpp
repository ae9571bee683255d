#include "overlap/time_series.hpp"

#include "overlap/error.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace overlap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeTimestamp: return "NegativeTimestamp";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparseableTime: return "UnparseableTime";
    case ErrorCode::UnparseableValue: return "UnparseableValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::ZeroStep: return "ZeroStep";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::UndefinedBaseline: return "UndefinedBaseline";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::SeriesMismatch: return "SeriesMismatch";
    case ErrorCode::UnknownSeries: return "UnknownSeries";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(SystemTag tag) {
  return tag == SystemTag::Ion ? "ION" : "HIST";
}

SystemTag parse_system_tag(std::string_view text) {
  if (text == "ION") return SystemTag::Ion;
  if (text == "HIST") return SystemTag::Hist;
  throw Error(ErrorCode::InvalidArgument,
              "system must be ION or HIST, got '" + std::string(text) + "'");
}

Eigen::VectorXd TimeSeries::values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = samples[i].v;
  }
  return out;
}

TimeSeries validate_series(TimeSeries raw) {
  for (std::size_t i = 0; i < raw.samples.size(); ++i) {
    const auto& s = raw.samples[i];
    if (!std::isfinite(s.v)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "sample " + std::to_string(i) + " of '" + raw.id.name + "'",
                  static_cast<std::int64_t>(i));
    }
    if (s.t.millis < 0) {
      throw Error(ErrorCode::NegativeTimestamp,
                  "sample " + std::to_string(i) + " of '" + raw.id.name + "'",
                  static_cast<std::int64_t>(i));
    }
  }
  std::stable_sort(raw.samples.begin(), raw.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.t < b.t; });
  return raw;
}

TimeSeries slice_by_range(const TimeSeries& s, Timestamp start, Timestamp end) {
  if (start > end) {
    throw Error(ErrorCode::InvalidRange,
                "start " + std::to_string(start.millis) + " > end " +
                    std::to_string(end.millis));
  }
  TimeSeries out{s.id, {}};
  std::copy_if(s.samples.begin(), s.samples.end(), std::back_inserter(out.samples),
               [&](const Sample& a) { return start <= a.t && a.t <= end; });
  return out;
}

bool is_time_sorted(const TimeSeries& s) {
  return std::is_sorted(s.samples.begin(), s.samples.end(),
                        [](const Sample& a, const Sample& b) { return a.t < b.t; });
}

}  // namespace overlap
