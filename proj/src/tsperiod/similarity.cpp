#include "tsperiod/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod {
namespace {

struct Segments {
  std::vector<double> slope, duration, hi, lo;
  double mean_span = 0.0;
};

Segments segment_features(Subsequence s) {
  if (s.size() < 2) throw Error(ErrorCode::ShapeError, "subsequence needs at least 2 knots");
  Segments f;
  const std::size_t h = s.size() - 1;
  f.slope.resize(h);
  f.duration.resize(h);
  f.hi.resize(h);
  f.lo.resize(h);
  double span = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    const double dt = s[i + 1].t - s[i].t;
    if (!(dt > 0.0)) throw Error(ErrorCode::DegenerateSegment, "zero-duration segment");
    f.slope[i] = (s[i + 1].k - s[i].k) / dt;
    f.duration[i] = dt;
    f.hi[i] = std::max(s[i].k, s[i + 1].k);
    f.lo[i] = std::min(s[i].k, s[i + 1].k);
    span += std::abs(s[i + 1].k - s[i].k);
  }
  f.mean_span = span / static_cast<double>(h);
  return f;
}

double ratio_similarity(double u, double v) {
  const double denom = std::max(std::abs(u), std::abs(v));
  if (denom == 0.0) return 1.0;
  return std::clamp(1.0 - std::abs(u - v) / denom, 0.0, 1.0);
}

double mean_ratio(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += ratio_similarity(a[i], b[i]);
  return s / static_cast<double>(a.size());
}

struct Aligned {
  Segments a, b;
};

Aligned align(Subsequence la, Subsequence lb) {
  if (la.size() < 2 || lb.size() < 2) throw Error(ErrorCode::ShapeError, "subsequence needs at least 2 knots");
  if (la.size() == lb.size()) return {segment_features(la), segment_features(lb)};
  const std::size_t h = std::min(la.size(), lb.size());
  const auto ra = resample_uniform(la, h);
  const auto rb = resample_uniform(lb, h);
  return {segment_features(ra), segment_features(rb)};
}

double span_ratio(double sa, double sb) {
  if (sa == 0.0 && sb == 0.0) return 1.0;
  if (sa == 0.0 || sb == 0.0) return 0.0;
  return std::clamp(std::min(sa, sb) / std::max(sa, sb), 0.0, 1.0);
}

SimilarityTuple tuple_of(const Aligned& al) {
  SimilarityTuple t;
  t.angular = mean_ratio(al.a.slope, al.b.slope);
  t.time_length = mean_ratio(al.a.duration, al.b.duration);
  t.max_sim = mean_ratio(al.a.hi, al.b.hi);
  t.min_sim = mean_ratio(al.a.lo, al.b.lo);
  t.value_interval = span_ratio(al.a.mean_span, al.b.mean_span);
  return t;
}

}  // namespace

double angular_similarity(Subsequence la, Subsequence lb) {
  const auto al = align(la, lb);
  return mean_ratio(al.a.slope, al.b.slope);
}

ScalarSimilarities scalar_similarities(Subsequence la, Subsequence lb) {
  const auto al = align(la, lb);
  return {mean_ratio(al.a.duration, al.b.duration), mean_ratio(al.a.hi, al.b.hi),
          mean_ratio(al.a.lo, al.b.lo)};
}

double value_interval_similarity(Subsequence la, Subsequence lb) {
  const auto al = align(la, lb);
  if (al.b.mean_span == 0.0) throw Error(ErrorCode::DegenerateSpan, "second subsequence has zero value span");
  return span_ratio(al.a.mean_span, al.b.mean_span);
}

SimilarityTuple similarity_tuple(Subsequence la, Subsequence lb) { return tuple_of(align(la, lb)); }

double radar_area(const SimilarityTuple& s) {
  return kSin72 / 2.0 *
         (s.angular * s.time_length + s.time_length * s.max_sim + s.max_sim * s.min_sim +
          s.min_sim * s.value_interval + s.value_interval * s.angular);
}

LengthRange candidate_lengths(std::size_t n_a, double phi) {
  if (!(phi >= 0.0 && phi < 1.0)) throw Error(ErrorCode::InvalidConfig, "phi must lie in [0,1)");
  if (n_a < 2) throw Error(ErrorCode::ShapeError, "comparison subsequence needs at least 2 knots");
  const double n = static_cast<double>(n_a);
  // The epsilon keeps products such as 0.7 * 10 from rounding across an integer.
  auto lo = static_cast<std::size_t>(std::floor((1.0 - phi) * n + 1e-9));
  auto hi = static_cast<std::size_t>(std::ceil((1.0 + phi) * n - 1e-9));
  lo = std::max<std::size_t>(lo, 2);
  hi = std::max(hi, lo);
  return {lo, hi};
}

Comparison best_comparison(std::span<const InflectionPoint> knots, std::size_t la_begin,
                           std::size_t n_a, double phi) {
  const auto range = candidate_lengths(n_a, phi);
  if (la_begin + n_a > knots.size()) throw Error(ErrorCode::IndexError, "la exceeds the abstraction");
  const std::size_t start = la_begin + n_a;
  const std::size_t remaining = knots.size() - start;
  if (remaining < range.lo) throw Error(ErrorCode::NotEnoughData, "not enough knots after la for a candidate");
  const Subsequence la = knots.subspan(la_begin, n_a);
  const std::size_t hi = std::min(range.hi, remaining);
  Comparison best;
  bool have = false;
  auto dist = [n_a](std::size_t len) { return len > n_a ? len - n_a : n_a - len; };
  for (std::size_t len = range.lo; len <= hi; ++len) {
    const auto tuple = tuple_of(align(la, knots.subspan(start, len)));
    const double area = radar_area(tuple);
    bool better = !have || area > best.area;
    if (have && area == best.area) {
      better = dist(len) < dist(best.lb_len) || (dist(len) == dist(best.lb_len) && len < best.lb_len);
    }
    if (better) {
      best = {start, len, tuple, area};
      have = true;
    }
  }
  return best;
}

Comparison best_comparison(const AbstractSeries& abstract, Subsequence la, double phi) {
  if (la.size() < 2) throw Error(ErrorCode::ShapeError, "comparison subsequence needs at least 2 knots");
  const auto& k = abstract.knots();
  auto it = std::lower_bound(k.begin(), k.end(), la.front().t,
                             [](const InflectionPoint& p, double t) { return p.t < t; });
  if (it == k.end() || it->t != la.front().t)
    throw Error(ErrorCode::IndexError, "la is not part of the abstraction");
  return best_comparison(std::span(k), static_cast<std::size_t>(it - k.begin()), la.size(), phi);
}

}  // namespace tsperiod
