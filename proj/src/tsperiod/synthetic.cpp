#include "tsperiod/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace tsperiod::synthetic {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Gaussian::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double Gaussian::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

TimeSeries noisy_sine(double period, std::size_t cycles, double snr_db, std::uint64_t seed) {
  Gaussian noise(seed);
  const double sigma = std::sqrt(0.5 / std::pow(10.0, snr_db / 10.0));
  const auto n = static_cast<std::size_t>(std::llround(period * static_cast<double>(cycles)));
  std::vector<TimePoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    pts[i] = {t, std::sin(kTwoPi * t / period) + sigma * noise()};
  }
  return validate_series(std::move(pts), "noisy_sine");
}

TimeSeries triangle_wave(double period, std::size_t samples) {
  std::vector<TimePoint> pts(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i);
    const double ph = std::fmod(t, period) / period;
    const double v = ph < 0.5 ? 4.0 * ph - 1.0 : 3.0 - 4.0 * ph;
    pts[i] = {t, v};
  }
  return validate_series(std::move(pts), "triangle");
}

TimeSeries zigzag(std::size_t samples, std::size_t breakpoints, std::uint64_t seed) {
  Gaussian rng(seed);
  const std::size_t pieces = breakpoints + 1;
  std::vector<TimePoint> pts(samples);
  double v = 0.0;
  int slope_sign = 1;
  std::size_t piece = 0;
  int slope = 1 + static_cast<int>(rng.uniform() * 5.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t this_piece = i * pieces / samples;
    if (this_piece != piece) {
      piece = this_piece;
      slope_sign = -slope_sign;
      slope = 1 + static_cast<int>(rng.uniform() * 5.0);
    }
    pts[i] = {static_cast<double>(i), v};
    v += slope_sign * slope;
  }
  return validate_series(std::move(pts), "zigzag");
}

TimeSeries daily_yearly(std::size_t years, std::uint64_t seed) {
  Gaussian noise(seed);
  const double year = 24.0 * 365.0;
  const auto n = static_cast<std::size_t>(year * static_cast<double>(years));
  std::vector<TimePoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const double season = std::sin(kTwoPi * t / year);
    const double v = 4.0 * season + 6.0 * (1.0 + 0.3 * season) * std::sin(kTwoPi * t / 24.0) + 0.3 * noise();
    pts[i] = {t, v};
  }
  return validate_series(std::move(pts), "daily_yearly");
}

TimeSeries weekly(std::size_t weeks, std::uint64_t seed) {
  Gaussian noise(seed);
  const std::size_t n = weeks * 7 * 24;
  std::vector<TimePoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const bool weekend = (i / 24) % 7 >= 5;
    const double level = weekend ? 4.0 : 10.0;
    const double amp = weekend ? 2.0 : 6.0;
    pts[i] = {t, level + amp * std::sin(kTwoPi * t / 24.0) + 0.2 * noise()};
  }
  return validate_series(std::move(pts), "weekly");
}

}  // namespace tsperiod::synthetic
