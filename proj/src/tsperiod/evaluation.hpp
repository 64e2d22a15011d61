#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsperiod/series.hpp"

namespace tsperiod {

struct MetricsReport {
  double r_dc = 0.0;
  double acc_de = 0.0;
  double confidence = 0.0;
  double rmse = 0.0;
  std::map<std::string, std::string> meta;
};

double compression_ratio(const TimeSeries& raw, const AbstractSeries& abstract);
double extraction_accuracy(const TimeSeries& raw, const AbstractSeries& abstract);

/// st is 1-based, as in the metric's definition.
double confidence(std::span<const int> symbols, std::span<const int> pattern, std::size_t st);
double confidence_oracle(std::span<const int> symbols, std::span<const int> pattern, std::size_t st);

double rmse(const TimeSeries& observed, const TimeSeries& predicted);

/// Equal-width binning of the values into symbols 0..bins-1.
std::vector<int> symbolize(std::span<const double> values, std::size_t bins);
std::vector<int> symbolize(const TimeSeries& series, std::size_t bins);

/// Most frequent block of `length` symbols among the aligned blocks starting at st.
std::vector<int> dominant_pattern(std::span<const int> symbols, std::size_t length, std::size_t st);

}  // namespace tsperiod
