#include "tsperiod/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tsperiod/error.hpp"
#include "tsperiod/pipeline/worker_pool.hpp"
#include "tsperiod/similarity.hpp"
#include "tsperiod/spectrum.hpp"

namespace tsperiod {
namespace {

constexpr std::size_t kOversample = 4;
constexpr double kFirstLayerMinKnots = 1.5;

template <class Fn>
void run_tasks(pipeline::WorkerPool* pool, std::size_t n, Fn&& fn) {
  if (pool) {
    pool->parallel_for(n, [&](std::size_t i, std::size_t) { fn(i); });
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

std::size_t grid_size(std::size_t m) { return std::max<std::size_t>(16, next_power_of_two(kOversample * (m - 1))); }

// Detrended skyline sampled on a uniform time grid.
std::vector<double> grid_periodic(std::span<const InflectionPoint> knots, std::size_t samples) {
  const double t0 = knots.front().t;
  const double span = knots.back().t - t0;
  std::vector<double> values(samples);
  std::size_t seg = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = t0 + span * static_cast<double>(s) / static_cast<double>(samples);
    while (seg + 2 < knots.size() && knots[seg + 1].t <= t) ++seg;
    values[s] = interpolate(knots[seg], knots[seg + 1], std::clamp(t, knots[seg].t, knots[seg + 1].t));
  }
  return decompose(values).periodic;
}

std::vector<double> grid_significance(std::span<const InflectionPoint> knots, std::size_t samples) {
  return significance(fourier_coefficients_fft(grid_periodic(knots, samples)));
}

double power_at(std::span<const double> v, double f) {
  const double w = 2.0 * std::numbers::pi * f / static_cast<double>(v.size());
  double re = 0.0, im = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    const double a = w * static_cast<double>(s);
    re += v[s] * std::cos(a);
    im += v[s] * std::sin(a);
  }
  return re * re + im * im;
}

// Cycles over the span, refined off the integer spectrum index by locating the
// periodogram peak within half a bin. Shifts below kSnap keep the integer.
constexpr double kNearlyComplete = 0.05;

double refine_cycles(std::span<const double> v, std::size_t index) {
  constexpr int kSteps = 40;
  constexpr double kSnap = 0.02;
  const double base = static_cast<double>(index);
  double best = base, best_p = power_at(v, base);
  for (int s = -kSteps; s <= kSteps; ++s) {
    const double f = base + 0.5 * static_cast<double>(s) / kSteps;
    if (f <= 0.5) continue;
    const double pw = power_at(v, f);
    if (pw > best_p) best = f, best_p = pw;
  }
  double lo = best - 0.5 / kSteps, hi = best + 0.5 / kSteps;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 40; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (power_at(v, a) >= power_at(v, b))
      hi = b;
    else
      lo = a;
  }
  const double f = 0.5 * (lo + hi);
  return std::abs(f - base) < kSnap ? base : f;
}

std::size_t argmax_in(const std::vector<double>& theta, std::size_t i_max) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < i_max; ++i)
    if (theta[i] > theta[best]) best = i;
  return best;
}

double permutation_gate(std::span<const InflectionPoint> knots, std::size_t samples, std::size_t i_max,
                        const DetectionConfig& cfg, std::size_t layer, pipeline::WorkerPool* pool) {
  std::vector<double> maxima(cfg.permutations, 0.0);
  run_tasks(pool, cfg.permutations, [&](std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(layer), static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<InflectionPoint> shuffled(knots.begin(), knots.end());
    // Fisher-Yates on values only; timestamps stay in place.
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * (i + 1)) >> 64);
      std::swap(shuffled[i].k, shuffled[j].k);
    }
    try {
      const auto theta = grid_significance(shuffled, samples);
      maxima[r] = theta[argmax_in(theta, i_max)];
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPeriodicity) throw;
    }
  });
  std::sort(maxima.begin(), maxima.end());
  const auto rank = static_cast<std::size_t>(std::ceil(cfg.gate_quantile * static_cast<double>(maxima.size())));
  return maxima[std::clamp<std::size_t>(rank, 1, maxima.size()) - 1];
}

struct PairResult {
  PairScore score;
  SpectrumCoefficients coeffs;
};

PairResult scan_pairs(const AbstractSeries& abstract, const DetectionConfig& cfg, std::size_t max_index,
                      pipeline::WorkerPool* pool) {
  const auto d = decompose(abstract);
  const auto& p = d.periodic;
  const std::size_t m = abstract.size();
  std::vector<InflectionPoint> pattern(m);
  for (std::size_t i = 0; i < m; ++i) pattern[i] = {abstract[i].t, p[i]};

  std::vector<std::size_t> lengths;
  for (std::size_t n_a = cfg.mu * ((2 + cfg.mu - 1) / cfg.mu); n_a < m; n_a += cfg.mu) {
    if (n_a + candidate_lengths(n_a, cfg.phi).lo > m) break;
    lengths.push_back(n_a);
  }
  if (lengths.empty()) throw Error(ErrorCode::NotEnoughData, "abstraction too short for a comparison pair");

  std::vector<PairResult> results(lengths.size());
  run_tasks(pool, lengths.size(), [&](std::size_t s) {
    const auto cmp = best_comparison(std::span<const InflectionPoint>(pattern), 0, lengths[s], cfg.phi);
    auto coeffs = similarity_adjusted_coefficients(p, lengths[s], cmp.lb_len, cmp.area,
                                                   static_cast<double>(cfg.mu), max_index);
    const double q = fit_residual(p, coeffs);
    results[s] = {{lengths[s], cmp.lb_len, cmp.area, q}, std::move(coeffs)};
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s)
    if (results[s].score.q < results[best].score.q) best = s;
  return std::move(results[best]);
}

// Fitting error of spectrum i alone (plus the mean) over the knot sequence.
double spectrum_residual(std::span<const double> p, const SpectrumCoefficients& c, std::size_t i) {
  if (i == 0 || i > c.k()) return std::numeric_limits<double>::infinity();
  double q = 0.0;
  for (std::size_t t = 1; t <= c.m; ++t) {
    const double ang = c.omega0 * static_cast<double>((i * t) % c.m);
    const double e = p[t - 1] - c.a0 - c.a[i - 1] * std::cos(ang) - c.b[i - 1] * std::sin(ang);
    q += e * e;
  }
  return q;
}

// `count` consecutive periods of `length` from the first knot; the last one is
// clipped to the final knot when it overshoots by rounding.
std::vector<Period> slice_periods(const AbstractSeries& abstract, std::size_t count, double length,
                                  std::size_t layer) {
  const auto& k = abstract.knots();
  const double t0 = abstract.start_t();
  std::vector<Period> out;
  out.reserve(count);
  std::size_t cursor = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double b0 = t0 + length * static_cast<double>(j);
    const double b1 = std::min(abstract.end_t(), t0 + length * static_cast<double>(j + 1));
    while (cursor < k.size() && k[cursor].t < b0) ++cursor;
    std::vector<InflectionPoint> knots;
    if (cursor == k.size() || k[cursor].t > b0) knots.push_back({b0, skyline_value(k, b0)});
    std::size_t c = cursor;
    while (c < k.size() && k[c].t <= b1) knots.push_back(k[c++]);
    if (knots.back().t < b1) knots.push_back({b1, skyline_value(k, b1)});
    Period p;
    p.start_t = b0;
    p.end_t = b1;
    p.layer = layer;
    p.ordinal = j;
    const std::size_t n = knots.size();
    p.abstraction = AbstractSeries(std::move(knots), n);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

void DetectionConfig::validate() const {
  if (mu < 1) throw Error(ErrorCode::InvalidConfig, "mu must be at least 1");
  if (!(phi >= 0.0 && phi < 1.0)) throw Error(ErrorCode::InvalidConfig, "phi must lie in [0,1)");
  if (min_periods < 2) throw Error(ErrorCode::InvalidConfig, "min_periods must be at least 2");
  if (max_layers < 1) throw Error(ErrorCode::InvalidConfig, "max_layers must be at least 1");
  if (!theta_gate && permutations < 1) throw Error(ErrorCode::InvalidConfig, "permutations must be at least 1");
  if (!(gate_quantile > 0.0 && gate_quantile <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "gate quantile must lie in (0,1]");
  if (representative_knots < 2) throw Error(ErrorCode::InvalidConfig, "representative_knots must be at least 2");
  compression.validate();
}

PeriodicLayer detect_layer(const AbstractSeries& abstract, const DetectionConfig& cfg, std::size_t layer,
                           double min_period_knots, pipeline::WorkerPool* pool) {
  cfg.validate();
  const std::size_t m = abstract.size();
  const auto& kn = abstract.knots();
  if (std::all_of(kn.begin(), kn.end(), [&](const InflectionPoint& p) { return p.k == kn.front().k; }))
    throw Error(ErrorCode::NoSignificantPeriod, "constant series has no periodic content");
  if (m < 2 * cfg.mu + 2 || m < 4)
    throw Error(ErrorCode::NotEnoughData, "abstraction has " + std::to_string(m) + " knots, need " +
                                              std::to_string(2 * cfg.mu + 2));
  const std::size_t samples = grid_size(m);
  const auto limit = static_cast<std::size_t>(std::floor(static_cast<double>(m - 1) / min_period_knots));
  const std::size_t i_max = std::min(samples / 2, limit);
  if (i_max < cfg.min_periods)
    throw Error(ErrorCode::NoSignificantPeriod, "abstraction too short to hold min_periods periods");

  std::vector<double> grid, theta;
  try {
    grid = grid_periodic(abstract.knots(), samples);
    theta = significance(fourier_coefficients_fft(grid));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoPeriodicity) throw Error(ErrorCode::NoSignificantPeriod, "no periodic content");
    throw;
  }
  const std::size_t top = argmax_in(theta, i_max);
  const double theta_max = theta[top];
  const double gate = cfg.theta_gate ? *cfg.theta_gate
                                     : permutation_gate(abstract.knots(), samples, i_max, cfg, layer, pool);
  if (!(theta_max > gate))
    throw Error(ErrorCode::NoSignificantPeriod, "strongest spectrum is not significant");

  const auto knot_limit = std::min(m / 2, static_cast<std::size_t>(i_max));
  const auto pair = scan_pairs(abstract, cfg, knot_limit, pool);

  // Near-ties in significance fall back to the best pair's per-spectrum fit.
  std::size_t chosen = top;
  const auto periodic = decompose(abstract).periodic;
  double chosen_q = spectrum_residual(periodic, pair.coeffs, top + 1);
  for (std::size_t i = 0; i < i_max; ++i) {
    if (i == top) continue;
    const bool tie = std::isinf(theta_max) ? std::isinf(theta[i])
                                           : std::abs(theta[i] - theta_max) <= 1e-9 * theta_max;
    if (!tie) continue;
    const double q = spectrum_residual(periodic, pair.coeffs, i + 1);
    if (q < chosen_q || (q == chosen_q && i < chosen)) {
      chosen = i;
      chosen_q = q;
    }
  }

  const double cycles = refine_cycles(grid, chosen + 1);
  // A trailing partial period counts only when nearly complete; it is clipped to the data.
  const auto count = static_cast<std::size_t>(std::floor(cycles + kNearlyComplete));
  if (count < cfg.min_periods)
    throw Error(ErrorCode::NoSignificantPeriod, "fewer than min_periods periods");
  const double span = abstract.end_t() - abstract.start_t();
  PeriodicLayer out;
  out.index = layer;
  out.spectrum_index = chosen + 1;
  out.theta_max = theta[chosen];
  out.gate = gate;
  out.best_pair = pair.score;
  out.period_length_knots = static_cast<double>(m - 1) / cycles;
  out.period_length_time = span / cycles;
  out.periods = slice_periods(abstract, count, out.period_length_time, layer);
  return out;
}

PeriodicLayer detect_first_layer(const AbstractSeries& abstract, const DetectionConfig& cfg,
                                 pipeline::WorkerPool* pool) {
  return detect_layer(abstract, cfg, 1, kFirstLayerMinKnots, pool);
}

double gaussian_kernel(double x_hat, double t_hat, double sigma) {
  const double s2 = sigma * sigma;
  return std::exp(-(x_hat * x_hat + t_hat * t_hat) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

Period gaussian_weights(const Period& period) {
  const auto& k = period.abstraction.knots();
  if (k.size() < 2) return period;
  const double n = static_cast<double>(k.size());
  double mx = 0.0, mt = 0.0;
  for (const auto& p : k) {
    mx += p.k;
    mt += p.t;
  }
  mx /= n;
  mt /= n;
  double vx = 0.0, vt = 0.0;
  for (const auto& p : k) {
    vx += (p.k - mx) * (p.k - mx);
    vt += (p.t - mt) * (p.t - mt);
  }
  const double sx = std::sqrt(vx / n), st = std::sqrt(vt / n);
  if (!(sx > 0.0) || !(st > 0.0)) return period;
  std::vector<double> w(k.size());
  double wmax = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    w[i] = gaussian_kernel((k[i].k - mx) / sx, (k[i].t - mt) / st, 1.0);
    wmax = std::max(wmax, w[i]);
  }
  std::vector<InflectionPoint> blurred(k);
  for (std::size_t i = 0; i < k.size(); ++i) blurred[i].k = k[i].k * (w[i] / wmax);
  Period out = period;
  out.abstraction = AbstractSeries(std::move(blurred), period.abstraction.source_len());
  return out;
}

AbstractSeries layer_representatives(const PeriodicLayer& layer, const DetectionConfig& cfg) {
  const std::size_t f = cfg.representative_knots;
  std::vector<InflectionPoint> seq;
  seq.reserve(layer.periods.size() * f);
  for (const auto& period : layer.periods) {
    const auto blurred = gaussian_weights(period);
    const auto compressed =
        compress(validate_series(to_points(blurred.abstraction.knots())), cfg.compression);
    const double span = period.end_t - period.start_t;
    for (std::size_t j = 0; j < f; ++j) {
      const double t = period.start_t + span * static_cast<double>(j) / static_cast<double>(f);
      seq.push_back({t, skyline_value(compressed.knots(), t)});
    }
  }
  const std::size_t n = seq.size();
  return AbstractSeries(std::move(seq), n);
}

MultiLayerModel detect_multi_layer(const AbstractSeries& abstract, const DetectionConfig& cfg,
                                   pipeline::WorkerPool* pool) {
  MultiLayerModel model;
  model.source = abstract;
  model.layers.push_back(detect_first_layer(abstract, cfg, pool));
  const double min_knots = 2.0 * static_cast<double>(cfg.representative_knots);
  while (model.layers.size() < cfg.max_layers) {
    const auto next = layer_representatives(model.layers.back(), cfg);
    try {
      model.layers.push_back(detect_layer(next, cfg, model.layers.size() + 1, min_knots, pool));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoSignificantPeriod || e.code() == ErrorCode::NotEnoughData) break;
      throw;
    }
  }
  return model;
}

}  // namespace tsperiod
