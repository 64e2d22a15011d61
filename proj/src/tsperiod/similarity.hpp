#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsperiod/series.hpp"

namespace tsperiod {

using Subsequence = std::span<const InflectionPoint>;

struct SimilarityTuple {
  double angular = 0.0;
  double time_length = 0.0;
  double max_sim = 0.0;
  double min_sim = 0.0;
  double value_interval = 0.0;
};

struct ScalarSimilarities {
  double time_length = 0.0;
  double max_sim = 0.0;
  double min_sim = 0.0;
};

inline constexpr double kSin72 = 0.9510565162951535;
inline constexpr double kMaxRadarArea = 2.5 * kSin72;

// Subsequences with different knot counts are compared after both are
// resampled to the smaller count at uniform phase.
double angular_similarity(Subsequence la, Subsequence lb);
ScalarSimilarities scalar_similarities(Subsequence la, Subsequence lb);
/// Smaller mean peak-valley span over the larger one.
double value_interval_similarity(Subsequence la, Subsequence lb);
SimilarityTuple similarity_tuple(Subsequence la, Subsequence lb);

double radar_area(const SimilarityTuple& s);

struct LengthRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};
LengthRange candidate_lengths(std::size_t n_a, double phi);

struct Comparison {
  std::size_t lb_begin = 0;  ///< knot index of the first knot of lb
  std::size_t lb_len = 0;
  SimilarityTuple tuple;
  double area = 0.0;
};

/// Best-matching lb starting right after la (located by its last timestamp).
Comparison best_comparison(const AbstractSeries& abstract, Subsequence la, double phi);
/// Same as above with la = knots [0, n_a) of `knots` given by index.
Comparison best_comparison(std::span<const InflectionPoint> knots, std::size_t la_begin,
                           std::size_t n_a, double phi);

}  // namespace tsperiod
