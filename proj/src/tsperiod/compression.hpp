#pragma once

#include <span>
#include <vector>

#include "tsperiod/series.hpp"

namespace tsperiod {

struct CompressionConfig {
  double delta = 0.85;    ///< inclination threshold
  double epsilon = 0.85;  ///< time-length threshold
  void validate() const;
};

double inclination(const TimePoint& p1, const TimePoint& p2);

/// Interior trend-change test on three consecutive raw points. Flat runs only
/// mark their entry and exit.
bool is_trend_change(const TimePoint& prev, const TimePoint& cur, const TimePoint& next);

AbstractSeries mark_inflections(const TimeSeries& series);

bool is_pseudo(const InflectionPoint& ki, const InflectionPoint& kmid, const InflectionPoint& kj,
               const CompressionConfig& cfg);

/// Single re-anchoring pass over `interior`. `anchor` is the last kept knot
/// before the run and `next` the knot right after it.
std::vector<InflectionPoint> prune_pass(const InflectionPoint& anchor,
                                        std::span<const InflectionPoint> interior,
                                        const InflectionPoint& next, const CompressionConfig& cfg);

AbstractSeries prune_pseudo(const AbstractSeries& abstract, const CompressionConfig& cfg);

AbstractSeries compress(const TimeSeries& series, const CompressionConfig& cfg);

}  // namespace tsperiod
