#include "tsperiod/pipeline/window.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod::pipeline {
namespace {

void check(double window, double slide) {
  if (!(slide > 0.0) || !(window >= slide) || !std::isfinite(window))
    throw Error(ErrorCode::InvalidConfig, "window durations need window >= slide > 0");
}

double sampling_step(std::span<const Record> stream) {
  if (stream.size() < 2) return 0.0;
  std::vector<double> gaps(stream.size() - 1);
  for (std::size_t i = 1; i < stream.size(); ++i) gaps[i - 1] = stream[i].t - stream[i - 1].t;
  auto mid = gaps.begin() + static_cast<std::ptrdiff_t>((gaps.size() - 1) / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  return *mid;
}

}  // namespace

std::size_t WindowBatch::size() const noexcept {
  std::size_t n = 0;
  for (const auto& p : partitions) n += p.size();
  return n;
}

std::vector<Record> WindowBatch::points() const {
  std::vector<Record> out;
  out.reserve(size());
  for (const auto& p : partitions) out.insert(out.end(), p.begin(), p.end());
  return out;
}

WindowBatch make_window(std::span<const Record> stream, std::int64_t j, double window, double slide,
                        std::size_t partitions, bool partial) {
  WindowBatch b;
  b.window_id = j;
  b.start_t = static_cast<double>(j) * slide;
  b.end_t = b.start_t + window;
  b.partial = partial;
  auto lo = std::lower_bound(stream.begin(), stream.end(), b.start_t,
                             [](const Record& r, double t) { return r.t < t; });
  auto hi = std::lower_bound(lo, stream.end(), b.end_t, [](const Record& r, double t) { return r.t < t; });
  const std::span<const Record> slice(lo, hi);
  b.partitions = split_even(slice, std::max<std::size_t>(1, std::min(partitions, slice.size())));
  return b;
}

std::vector<WindowBatch> window_split(std::span<const Record> stream, double window, double slide,
                                      std::size_t partitions) {
  check(window, slide);
  std::vector<WindowBatch> out;
  if (stream.empty()) return out;
  const double first = stream.front().t, last = stream.back().t;
  const double covered = last + sampling_step(stream);
  const auto j_lo = static_cast<std::int64_t>(std::floor(first / slide));
  const auto j_hi = static_cast<std::int64_t>(std::floor(last / slide));
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const double end = static_cast<double>(j) * slide + window;
    auto b = make_window(stream, j, window, slide, partitions, end > covered);
    if (b.size() > 0) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace tsperiod::pipeline
