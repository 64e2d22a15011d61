#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tsperiod/compression.hpp"
#include "tsperiod/series.hpp"

namespace tsperiod {

namespace pipeline {
class WorkerPool;
}

struct DetectionConfig {
  std::size_t mu = 10;
  double phi = 0.3;
  /// Fixed significance gate. Unset means the permutation null decides.
  std::optional<double> theta_gate;
  std::size_t permutations = 200;
  double gate_quantile = 0.95;
  std::size_t min_periods = 3;
  std::size_t max_layers = 5;
  std::uint64_t seed = 42;
  /// Knots per period handed to the next layer.
  std::size_t representative_knots = 4;
  CompressionConfig compression;
  void validate() const;
};

struct Period {
  double start_t = 0.0;
  double end_t = 0.0;
  AbstractSeries abstraction;
  std::size_t layer = 1;
  std::size_t ordinal = 0;
};

struct PairScore {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double area = 0.0;
  double q = 0.0;
};

struct PeriodicLayer {
  std::size_t index = 1;
  double period_length_knots = 0.0;
  double period_length_time = 0.0;
  std::vector<Period> periods;
  double theta_max = 0.0;
  double gate = 0.0;
  std::size_t spectrum_index = 0;
  PairScore best_pair;
};

struct MultiLayerModel {
  std::vector<PeriodicLayer> layers;
  AbstractSeries source;
  /// Raw sampling step used as the default prediction unit.
  double unit = 1.0;
};

PeriodicLayer detect_first_layer(const AbstractSeries& abstract, const DetectionConfig& cfg,
                                 pipeline::WorkerPool* pool = nullptr);

/// One detection pass. `min_period_knots` bounds the shortest admissible period
/// in mean knot intervals.
PeriodicLayer detect_layer(const AbstractSeries& abstract, const DetectionConfig& cfg, std::size_t layer,
                           double min_period_knots, pipeline::WorkerPool* pool = nullptr);

double gaussian_kernel(double x_hat, double t_hat, double sigma);
Period gaussian_weights(const Period& period);

/// Sequence of per-period representatives feeding the next layer.
AbstractSeries layer_representatives(const PeriodicLayer& layer, const DetectionConfig& cfg);

MultiLayerModel detect_multi_layer(const AbstractSeries& abstract, const DetectionConfig& cfg,
                                   pipeline::WorkerPool* pool = nullptr);

}  // namespace tsperiod
