#include "tsperiod/compression.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod {
namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double slope(double t1, double x1, double t2, double x2) {
  const double dt = t2 - t1;
  if (!(dt > 0.0)) throw Error(ErrorCode::DegenerateSegment, "zero time gap");
  return (x2 - x1) / dt;
}

}  // namespace

void CompressionConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidConfig, "delta must lie in (0,1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0,1]");
}

double inclination(const TimePoint& p1, const TimePoint& p2) { return slope(p1.t, p1.x, p2.t, p2.x); }

bool is_trend_change(const TimePoint& prev, const TimePoint& cur, const TimePoint& next) {
  // Signs rather than the slope product: the product underflows for tiny slopes.
  const int s1 = sign(inclination(prev, cur));
  const int s2 = sign(inclination(cur, next));
  return s1 != s2;
}

AbstractSeries mark_inflections(const TimeSeries& series) {
  const auto& p = series.points();
  if (p.size() < 2) throw Error(ErrorCode::TooShort, "series needs at least 2 points");
  std::vector<InflectionPoint> out;
  out.push_back({p.front().t, p.front().x});
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (is_trend_change(p[i - 1], p[i], p[i + 1])) out.push_back({p[i].t, p[i].x});
  }
  out.push_back({p.back().t, p.back().x});
  return AbstractSeries(std::move(out), p.size());
}

bool is_pseudo(const InflectionPoint& ki, const InflectionPoint& kmid, const InflectionPoint& kj,
               const CompressionConfig& cfg) {
  const double r1 = slope(ki.t, ki.k, kmid.t, kmid.k);
  const double r2 = slope(kmid.t, kmid.k, kj.t, kj.k);
  const double r = slope(ki.t, ki.k, kj.t, kj.k);
  const double denom = std::max(std::abs(r1), std::abs(r2));
  const double s_r = denom == 0.0 ? 1.0 : std::abs(r) / denom;
  const double g1 = kmid.t - ki.t;
  const double g2 = kj.t - kmid.t;
  const double s_t = std::max(g1, g2) / (kj.t - ki.t);
  return s_r >= cfg.delta && s_t >= cfg.epsilon;
}

std::vector<InflectionPoint> prune_pass(const InflectionPoint& anchor,
                                        std::span<const InflectionPoint> interior,
                                        const InflectionPoint& next, const CompressionConfig& cfg) {
  std::vector<InflectionPoint> kept;
  kept.reserve(interior.size());
  InflectionPoint left = anchor;
  for (std::size_t j = 0; j < interior.size(); ++j) {
    const InflectionPoint& right = j + 1 < interior.size() ? interior[j + 1] : next;
    if (!is_pseudo(left, interior[j], right, cfg)) {
      kept.push_back(interior[j]);
      left = interior[j];
    }
  }
  return kept;
}

AbstractSeries prune_pseudo(const AbstractSeries& abstract, const CompressionConfig& cfg) {
  cfg.validate();
  const auto& k = abstract.knots();
  if (k.size() <= 2) return abstract;
  std::vector<InflectionPoint> out;
  out.reserve(k.size());
  out.push_back(k.front());
  auto kept = prune_pass(k.front(), std::span(k).subspan(1, k.size() - 2), k.back(), cfg);
  out.insert(out.end(), kept.begin(), kept.end());
  out.push_back(k.back());
  return AbstractSeries(std::move(out), abstract.source_len());
}

AbstractSeries compress(const TimeSeries& series, const CompressionConfig& cfg) {
  cfg.validate();
  return prune_pseudo(mark_inflections(series), cfg);
}

}  // namespace tsperiod
