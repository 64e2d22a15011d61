#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsperiod {

enum class ErrorCode {
  DuplicateTimestamp,
  InvalidValue,
  TooShort,
  OutOfSegment,
  DegenerateSegment,
  DegenerateSpan,
  NoPeriodicity,
  NoSignificantPeriod,
  NotEnoughData,
  ShapeError,
  IndexError,
  InvalidConfig,
  EmptyLayer,
  EmptyModel,
  MissingModel,
  EmptyAbstraction,
  PatternTooLong,
  UnknownTransform,
  CyclicLineage,
  ParseError,
  EmptyColumn,
  IoError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library. `line()` is set for ParseError only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace tsperiod
