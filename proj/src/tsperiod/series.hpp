#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tsperiod {

struct TimePoint {
  double t = 0.0;
  double x = 0.0;
  friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

struct InflectionPoint {
  double t = 0.0;
  double k = 0.0;
  friend bool operator==(const InflectionPoint&, const InflectionPoint&) = default;
};

/// Strictly time-ordered raw series. Only validate_series builds one.
class TimeSeries {
 public:
  TimeSeries() = default;

  const std::vector<TimePoint>& points() const noexcept { return points_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return points_.size(); }
  const TimePoint& operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const TimeSeries& a, const TimeSeries& b) { return a.points_ == b.points_; }

 private:
  friend TimeSeries validate_series(std::vector<TimePoint> points, std::string name);
  std::vector<TimePoint> points_;
  std::string name_;
};

/// Inflection-point skyline of a source series.
class AbstractSeries {
 public:
  AbstractSeries() = default;
  /// Checks ordering, finiteness and 2 <= m <= source_len.
  AbstractSeries(std::vector<InflectionPoint> knots, std::size_t source_len);

  const std::vector<InflectionPoint>& knots() const noexcept { return knots_; }
  std::size_t size() const noexcept { return knots_.size(); }
  std::size_t source_len() const noexcept { return source_len_; }
  const InflectionPoint& operator[](std::size_t i) const { return knots_[i]; }
  double start_t() const { return knots_.front().t; }
  double end_t() const { return knots_.back().t; }

  friend bool operator==(const AbstractSeries&, const AbstractSeries&) = default;

 private:
  std::vector<InflectionPoint> knots_;
  std::size_t source_len_ = 0;
};

TimeSeries validate_series(std::vector<TimePoint> points, std::string name = {});

double interpolate(const InflectionPoint& left, const InflectionPoint& right, double t);

/// Piecewise-linear value of the knot skyline at t; t is clamped to the knot span.
double skyline_value(std::span<const InflectionPoint> knots, double t);

/// Samples the skyline at `count` evenly spaced phases over [first, last] (both ends included).
std::vector<InflectionPoint> resample_uniform(std::span<const InflectionPoint> knots, std::size_t count);

std::vector<InflectionPoint> to_knots(std::span<const TimePoint> points);
std::vector<TimePoint> to_points(std::span<const InflectionPoint> knots);

double median_interval(const TimeSeries& series);

}  // namespace tsperiod
