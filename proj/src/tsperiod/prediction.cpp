#include "tsperiod/prediction.hpp"

#include <algorithm>
#include <cmath>

#include "tsperiod/error.hpp"

namespace tsperiod {
namespace {

// Windows of the source skyline that sit at the horizon's offset inside each
// period of the layer; only windows that end within the data are kept.
std::vector<double> window_starts(const PeriodicLayer& layer, const AbstractSeries& source, double h0,
                                  double length) {
  const double la = layer.period_length_time;
  const double s1 = layer.periods.front().start_t;
  double off = std::fmod(h0 - s1, la);
  if (off < 0.0) off += la;
  if (off < 1e-9 * la || off > la * (1.0 - 1e-9)) off = 0.0;
  const double tol = 1e-9 * length;
  std::vector<double> starts;
  for (const auto& p : layer.periods) {
    const double w0 = p.start_t + off;
    if (w0 + length <= source.end_t() + tol) starts.push_back(w0);
  }
  return starts;
}

// Phases in [0, 1] of every source knot inside any window, so the weighted
// sum of window skylines is exact between consecutive phases.
std::vector<double> kink_phases(const std::vector<std::vector<double>>& starts, const AbstractSeries& source,
                                double length) {
  const auto& k = source.knots();
  std::vector<double> ph{0.0, 1.0};
  for (const auto& layer : starts) {
    for (double w0 : layer) {
      auto it = std::upper_bound(k.begin(), k.end(), w0,
                                 [](double v, const InflectionPoint& p) { return v < p.t; });
      for (; it != k.end() && it->t < w0 + length; ++it) ph.push_back((it->t - w0) / length);
    }
  }
  std::sort(ph.begin(), ph.end());
  std::vector<double> out;
  for (double v : ph) {
    if (v <= 1e-9 || v >= 1.0 - 1e-9) continue;
    if (!out.empty() && v - out.back() <= 1e-9) continue;
    out.push_back(v);
  }
  out.insert(out.begin(), 0.0);
  out.push_back(1.0);
  return out;
}

std::vector<double> window_average(const std::vector<double>& starts, const std::vector<double>& weights,
                                   const AbstractSeries& source, std::span<const double> phases, double length) {
  std::vector<double> out(phases.size(), 0.0);
  for (std::size_t i = 0; i < starts.size(); ++i)
    for (std::size_t f = 0; f < phases.size(); ++f)
      out[f] += weights[i] * skyline_value(source.knots(), starts[i] + phases[f] * length);
  return out;
}

double phase(std::size_t f, std::size_t count) {
  return static_cast<double>(f) / static_cast<double>(count - 1);
}

}  // namespace

std::vector<double> attenuation_weights(std::size_t count) {
  if (count == 0) throw Error(ErrorCode::EmptyLayer, "layer has no periods");
  const double t = static_cast<double>(count);
  std::vector<double> w(count);
  double sum = 0.0;
  for (std::size_t i = 1; i <= count; ++i) {
    w[i - 1] = std::exp(-(t - static_cast<double>(i)) / t);
    sum += w[i - 1];
  }
  for (auto& v : w) v /= sum;
  return w;
}

std::vector<InflectionPoint> predict_layer_component(const PeriodicLayer& layer, std::size_t knot_count) {
  if (layer.periods.empty()) throw Error(ErrorCode::EmptyLayer, "layer has no periods");
  if (knot_count < 2) throw Error(ErrorCode::InvalidConfig, "knot_count must be at least 2");
  const auto w = attenuation_weights(layer.periods.size());
  std::vector<InflectionPoint> out(knot_count);
  for (std::size_t f = 0; f < knot_count; ++f) out[f].t = phase(f, knot_count);
  for (std::size_t i = 0; i < layer.periods.size(); ++i) {
    const auto& p = layer.periods[i];
    const auto& k = p.abstraction.knots();
    const double span = p.end_t - p.start_t;
    for (std::size_t f = 0; f < knot_count; ++f) {
      const double t = f + 1 == knot_count ? p.end_t : p.start_t + out[f].t * span;
      out[f].k += w[i] * skyline_value(k, t);
    }
  }
  return out;
}

std::size_t alignment_knot_count(const PeriodicLayer& layer) {
  if (layer.periods.empty()) throw Error(ErrorCode::EmptyLayer, "layer has no periods");
  std::vector<std::size_t> sizes;
  for (const auto& p : layer.periods) sizes.push_back(p.abstraction.size());
  std::sort(sizes.begin(), sizes.end());
  return std::max<std::size_t>(2, sizes[(sizes.size() - 1) / 2]);
}

PredictionResult predict_next_period(const MultiLayerModel& model, double unit) {
  if (model.layers.empty()) throw Error(ErrorCode::EmptyModel, "model has no layers");
  if (!(unit > 0.0) || !std::isfinite(unit)) throw Error(ErrorCode::InvalidConfig, "unit must be positive");
  const auto& first = model.layers.front();
  if (first.periods.empty()) throw Error(ErrorCode::EmptyLayer, "first layer has no periods");
  // The horizon starts where the data ends, so a trailing partial period
  // shifts every layer's phase.
  const double h0 = model.source.end_t();
  const double length = first.period_length_time;

  PredictionResult r;
  r.horizon_start = h0;
  r.horizon_end = h0 + length;
  std::vector<std::vector<double>> starts;
  for (const auto& layer : model.layers) {
    if (layer.periods.empty()) continue;
    auto w0 = window_starts(layer, model.source, h0, length);
    if (!w0.empty()) starts.push_back(std::move(w0));
  }
  if (starts.empty()) throw Error(ErrorCode::EmptyLayer, "no period lines up with the horizon");
  const auto phases = kink_phases(starts, model.source, length);

  std::vector<double> sum(phases.size(), 0.0);
  for (const auto& w0 : starts) {
    auto w = attenuation_weights(w0.size());
    const auto v = window_average(w0, w, model.source, phases, length);
    for (std::size_t f = 0; f < phases.size(); ++f) sum[f] += v[f];
    r.layer_weights.push_back(std::move(w));
  }
  const double q = static_cast<double>(starts.size());
  r.predicted_inflections.resize(phases.size());
  for (std::size_t f = 0; f < phases.size(); ++f)
    r.predicted_inflections[f] = {f + 1 == phases.size() ? r.horizon_end : h0 + phases[f] * length, sum[f] / q};
  r.fitted = fit_period(r.predicted_inflections, unit);
  return r;
}

TimeSeries fit_period(std::span<const InflectionPoint> knots, double unit) {
  if (knots.size() < 2) throw Error(ErrorCode::TooShort, "fitting needs at least 2 knots");
  if (!(unit > 0.0) || !std::isfinite(unit)) throw Error(ErrorCode::InvalidConfig, "unit must be positive");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].t > knots[i - 1].t)) throw Error(ErrorCode::DegenerateSegment, "knots must increase strictly");
  const double first = knots.front().t, last = knots.back().t;
  std::vector<TimePoint> pts;
  for (std::size_t j = 0;; ++j) {
    const double t = first + static_cast<double>(j) * unit;
    if (t >= last - 1e-9 * unit) break;
    pts.push_back({t, skyline_value(knots, t)});
  }
  pts.push_back({last, knots.back().k});
  if (pts.size() < 2) pts.insert(pts.begin(), TimePoint{first, knots.front().k});
  return validate_series(std::move(pts));
}

}  // namespace tsperiod
