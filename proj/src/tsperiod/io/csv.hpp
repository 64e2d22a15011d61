#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tsperiod/series.hpp"

namespace tsperiod::io {

struct CsvSchema {
  std::string time_column = "timestamp";
  std::string value_column = "value";
  /// Seconds per tick for calendar timestamps.
  double tick_seconds = 1.0;
  /// Samples per cycle; enables same-phase filling of missing values.
  std::optional<std::size_t> cycle_hint;
};

TimeSeries ingest_csv(const std::string& path, const CsvSchema& schema);
TimeSeries parse_csv(std::istream& in, const CsvSchema& schema, std::string name = {});

/// Seconds since the Unix epoch for an ISO-8601 date or date-time (UTC unless an offset is given).
std::optional<double> parse_iso8601(std::string_view text);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

void write_points_csv(std::ostream& out, std::span<const TimePoint> points);
void write_knots_csv(std::ostream& out, std::span<const InflectionPoint> knots);

}  // namespace tsperiod::io
