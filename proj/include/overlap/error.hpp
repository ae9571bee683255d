#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace overlap {

enum class ErrorCode {
  NonFiniteValue,
  NegativeTimestamp,
  InvalidRange,
  MissingColumn,
  UnparseableTime,
  UnparseableValue,
  IoError,
  DuplicateId,
  InvalidManifest,
  ZeroStep,
  EmptyInput,
  TooShort,
  EmptyPartition,
  UndefinedBaseline,
  EmptyWindow,
  TooFewSamples,
  SeriesMismatch,
  UnknownSeries,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `where()` carries the offending
/// sample/row index when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::int64_t> where = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        where_(where) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::int64_t> where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> where_;
};

}  // namespace overlap
