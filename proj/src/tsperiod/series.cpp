#include "tsperiod/series.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::OutOfSegment: return "OutOfSegment";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::NoPeriodicity: return "NoPeriodicity";
    case ErrorCode::NoSignificantPeriod: return "NoSignificantPeriod";
    case ErrorCode::NotEnoughData: return "NotEnoughData";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyLayer: return "EmptyLayer";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::EmptyAbstraction: return "EmptyAbstraction";
    case ErrorCode::PatternTooLong: return "PatternTooLong";
    case ErrorCode::UnknownTransform: return "UnknownTransform";
    case ErrorCode::CyclicLineage: return "CyclicLineage";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(message), code_(code), line_(line) {}

TimeSeries validate_series(std::vector<TimePoint> points, std::string name) {
  if (points.size() < 2) throw Error(ErrorCode::TooShort, "series needs at least 2 points");
  for (const auto& p : points) {
    if (!std::isfinite(p.t) || !std::isfinite(p.x))
      throw Error(ErrorCode::InvalidValue, "non-finite timestamp or value");
  }
  if (!std::is_sorted(points.begin(), points.end(),
                      [](const TimePoint& a, const TimePoint& b) { return a.t < b.t; })) {
    std::stable_sort(points.begin(), points.end(),
                     [](const TimePoint& a, const TimePoint& b) { return a.t < b.t; });
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].t == points[i - 1].t)
      throw Error(ErrorCode::DuplicateTimestamp, "duplicate timestamp " + std::to_string(points[i].t));
  }
  TimeSeries s;
  s.points_ = std::move(points);
  s.name_ = std::move(name);
  return s;
}

AbstractSeries::AbstractSeries(std::vector<InflectionPoint> knots, std::size_t source_len)
    : knots_(std::move(knots)), source_len_(source_len) {
  if (knots_.empty()) throw Error(ErrorCode::EmptyAbstraction, "abstraction has no knots");
  if (knots_.size() < 2) throw Error(ErrorCode::TooShort, "abstraction needs at least 2 knots");
  if (knots_.size() > source_len_)
    throw Error(ErrorCode::ShapeError, "abstraction larger than its source");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].k))
      throw Error(ErrorCode::InvalidValue, "non-finite knot");
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t))
      throw Error(ErrorCode::DuplicateTimestamp, "knot timestamps must increase strictly");
  }
}

double interpolate(const InflectionPoint& left, const InflectionPoint& right, double t) {
  const double span = right.t - left.t;
  if (!(span > 0.0)) throw Error(ErrorCode::DegenerateSegment, "zero or negative segment span");
  if (t < left.t || t > right.t) throw Error(ErrorCode::OutOfSegment, "timestamp outside segment");
  if (t == right.t) return right.k;
  const double slope = (right.k - left.k) / span;
  const double v = slope * (t - left.t) + left.k;
  // Rounding can overshoot the segment's value range by an ulp; keep it inside.
  return std::clamp(v, std::min(left.k, right.k), std::max(left.k, right.k));
}

double skyline_value(std::span<const InflectionPoint> knots, double t) {
  if (knots.empty()) throw Error(ErrorCode::EmptyAbstraction, "no knots");
  if (knots.size() == 1 || t <= knots.front().t) return knots.front().k;
  if (t >= knots.back().t) return knots.back().k;
  auto it = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double v, const InflectionPoint& k) { return v < k.t; });
  const auto& right = *it;
  const auto& left = *(it - 1);
  return interpolate(left, right, t);
}

std::vector<InflectionPoint> resample_uniform(std::span<const InflectionPoint> knots, std::size_t count) {
  if (knots.size() < 2) throw Error(ErrorCode::TooShort, "resampling needs 2 knots");
  if (count < 2) throw Error(ErrorCode::InvalidConfig, "resampling needs at least 2 samples");
  const double t0 = knots.front().t;
  const double span = knots.back().t - t0;
  std::vector<InflectionPoint> out(count);
  const double segs = static_cast<double>(count - 1);
  std::size_t right = 1;
  for (std::size_t j = 0; j < count; ++j) {
    const double t = j + 1 == count ? knots.back().t : t0 + span * (static_cast<double>(j) / segs);
    if (t <= t0) {
      out[j] = {t, knots.front().k};
    } else if (t >= knots.back().t) {
      out[j] = {t, knots.back().k};
    } else {
      while (knots[right].t <= t) ++right;
      out[j] = {t, interpolate(knots[right - 1], knots[right], t)};
    }
  }
  return out;
}

std::vector<InflectionPoint> to_knots(std::span<const TimePoint> points) {
  std::vector<InflectionPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.t, p.x});
  return out;
}

std::vector<TimePoint> to_points(std::span<const InflectionPoint> knots) {
  std::vector<TimePoint> out;
  out.reserve(knots.size());
  for (const auto& k : knots) out.push_back({k.t, k.k});
  return out;
}

double median_interval(const TimeSeries& series) {
  const auto& p = series.points();
  if (p.size() < 2) throw Error(ErrorCode::TooShort, "series needs at least 2 points");
  std::vector<double> gaps(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) gaps[i - 1] = p[i].t - p[i - 1].t;
  auto mid = gaps.begin() + static_cast<std::ptrdiff_t>((gaps.size() - 1) / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  return *mid;
}

}  // namespace tsperiod
