#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "tsperiod/series.hpp"

namespace tsperiod::synthetic {

/// Box-Muller over mt19937_64 so the stream is identical on every standard library.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()();
  double uniform();

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Unit-amplitude sine, integer ticks, with white noise at the given SNR.
TimeSeries noisy_sine(double period, std::size_t cycles, double snr_db, std::uint64_t seed);

/// Symmetric triangle wave in [-1, 1] sampled at integer ticks.
TimeSeries triangle_wave(double period, std::size_t samples);

/// Piecewise-linear zigzag with `breakpoints` interior slope changes and
/// integer slopes, sampled at integer ticks.
TimeSeries zigzag(std::size_t samples, std::size_t breakpoints, std::uint64_t seed);

/// Hourly series: yearly level plus a daily cycle whose amplitude follows the season.
TimeSeries daily_yearly(std::size_t years, std::uint64_t seed);

/// Hourly series: daily cycle with weekday and weekend regimes.
TimeSeries weekly(std::size_t weeks, std::uint64_t seed);

}  // namespace tsperiod::synthetic
