#include "tsperiod/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod {
namespace {

std::size_t expected_occurrences(std::size_t n, std::size_t len, std::size_t st) {
  if (len == 0) throw Error(ErrorCode::ShapeError, "pattern is empty");
  if (st < 1) throw Error(ErrorCode::IndexError, "st is 1-based");
  const std::size_t pe = st > n ? 0 : (n - st + 1) / len;
  if (pe == 0) throw Error(ErrorCode::PatternTooLong, "pattern does not fit after st");
  return pe;
}

}  // namespace

double compression_ratio(const TimeSeries& raw, const AbstractSeries& abstract) {
  if (abstract.size() == 0) throw Error(ErrorCode::EmptyAbstraction, "abstraction has no knots");
  return static_cast<double>(raw.size()) / static_cast<double>(abstract.size());
}

double extraction_accuracy(const TimeSeries& raw, const AbstractSeries& abstract) {
  const auto& k = abstract.knots();
  if (k.empty()) throw Error(ErrorCode::EmptyAbstraction, "abstraction has no knots");
  constexpr double eps0 = 1e-12;
  double err = 0.0;
  std::size_t count = 0;
  std::size_t seg = 0;
  for (const auto& p : raw.points()) {
    while (seg < k.size() && k[seg].t < p.t) ++seg;
    if (seg < k.size() && k[seg].t == p.t) continue;  // knots are exact by construction
    if (seg == 0 || seg == k.size()) throw Error(ErrorCode::OutOfSegment, "abstraction does not span the series");
    const double fit = interpolate(k[seg - 1], k[seg], p.t);
    err += std::abs(p.x - fit) / std::max({std::abs(p.x), std::abs(fit), eps0});
    ++count;
  }
  return count == 0 ? 1.0 : 1.0 - err / static_cast<double>(count);
}

double confidence(std::span<const int> symbols, std::span<const int> pattern, std::size_t st) {
  const std::size_t len = pattern.size();
  const std::size_t pe = expected_occurrences(symbols.size(), len, st);
  // match[i] is true where symbol i agrees with the pattern at its aligned phase.
  std::vector<char> match(symbols.size(), 0);
  for (std::size_t i = st - 1; i < symbols.size(); ++i) match[i] = symbols[i] == pattern[(i - (st - 1)) % len];
  std::size_t pa = 0;
  for (std::size_t j = 0; j < pe; ++j) {
    const std::size_t begin = st - 1 + j * len;
    if (std::all_of(match.begin() + static_cast<std::ptrdiff_t>(begin),
                    match.begin() + static_cast<std::ptrdiff_t>(begin + len), [](char c) { return c != 0; }))
      ++pa;
  }
  return static_cast<double>(pa) / static_cast<double>(pe);
}

double confidence_oracle(std::span<const int> symbols, std::span<const int> pattern, std::size_t st) {
  const std::size_t pe = expected_occurrences(symbols.size(), pattern.size(), st);
  std::size_t pa = 0;
  for (std::size_t pos = st - 1; pos + pattern.size() <= symbols.size(); pos += pattern.size()) {
    if (std::equal(pattern.begin(), pattern.end(), symbols.begin() + static_cast<std::ptrdiff_t>(pos))) ++pa;
  }
  return static_cast<double>(pa) / static_cast<double>(pe);
}

double rmse(const TimeSeries& observed, const TimeSeries& predicted) {
  if (observed.size() != predicted.size() || observed.size() == 0)
    throw Error(ErrorCode::ShapeError, "series must have equal non-zero length");
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i].t != predicted[i].t) throw Error(ErrorCode::ShapeError, "timestamps are not aligned");
    const double d = observed[i].x - predicted[i].x;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(observed.size()));
}

std::vector<int> symbolize(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::InvalidConfig, "bin count must be positive");
  std::vector<int> out(values.size(), 0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double width = (*hi - *lo) / static_cast<double>(bins);
  if (!(width > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::size_t>((values[i] - *lo) / width);
    out[i] = static_cast<int>(std::min(b, bins - 1));
  }
  return out;
}

std::vector<int> symbolize(const TimeSeries& series, std::size_t bins) {
  std::vector<double> v;
  v.reserve(series.size());
  for (const auto& p : series.points()) v.push_back(p.x);
  return symbolize(v, bins);
}

std::vector<int> dominant_pattern(std::span<const int> symbols, std::size_t length, std::size_t st) {
  const std::size_t pe = expected_occurrences(symbols.size(), length, st);
  std::map<std::vector<int>, std::size_t> counts;
  std::vector<int> best;
  std::size_t best_count = 0;
  for (std::size_t j = 0; j < pe; ++j) {
    const auto begin = symbols.begin() + static_cast<std::ptrdiff_t>(st - 1 + j * length);
    std::vector<int> block(begin, begin + static_cast<std::ptrdiff_t>(length));
    const std::size_t c = ++counts[block];
    // Earliest block wins ties so the choice is stable.
    if (c > best_count) {
      best_count = c;
      best = std::move(block);
    }
  }
  return best;
}

}  // namespace tsperiod
