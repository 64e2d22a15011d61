#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsperiod/periodicity.hpp"
#include "tsperiod/series.hpp"

namespace tsperiod {

struct PredictionResult {
  std::vector<InflectionPoint> predicted_inflections;
  TimeSeries fitted;
  double horizon_start = 0.0;
  double horizon_end = 0.0;
  /// Attenuation weights per contributing layer, oldest period first.
  std::vector<std::vector<double>> layer_weights;
};

/// w_i proportional to exp(-(T-i)/T), normalized; the newest period weighs most.
std::vector<double> attenuation_weights(std::size_t count);

/// Weighted per-phase combination of the layer's periods. Timestamps of the
/// result are phases in [0,1].
std::vector<InflectionPoint> predict_layer_component(const PeriodicLayer& layer, std::size_t knot_count);

/// Knot count used to align periods: lower median of layer-1 period sizes.
std::size_t alignment_knot_count(const PeriodicLayer& layer);

PredictionResult predict_next_period(const MultiLayerModel& model, double unit);

TimeSeries fit_period(std::span<const InflectionPoint> knots, double unit);

}  // namespace tsperiod
