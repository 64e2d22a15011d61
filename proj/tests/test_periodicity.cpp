#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tsperiod/compression.hpp"
#include "tsperiod/error.hpp"
#include "tsperiod/periodicity.hpp"
#include "tsperiod/synthetic.hpp"

using namespace tsperiod;

namespace {

// Eight knots per cycle with an irregular shape, cycles of 8 ticks.
AbstractSeries eight_knot_cycles(std::size_t cycles, double offset = 0.0) {
  const double shape[] = {0, 3, 1, 4, -2, 2, -3, 1};
  std::vector<InflectionPoint> k;
  for (std::size_t c = 0; c < cycles; ++c)
    for (std::size_t j = 0; j < 8; ++j) k.push_back({static_cast<double>(c * 8 + j), shape[j] + offset});
  k.push_back({static_cast<double>(cycles * 8), shape[0] + offset});
  return AbstractSeries(k, k.size());
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("first layer on an eight-knot cycle") {
  const DetectionConfig cfg;
  const auto layer = detect_first_layer(eight_knot_cycles(10), cfg);
  CHECK(layer.period_length_knots == doctest::Approx(8.0));
  CHECK(layer.period_length_time == doctest::Approx(8.0));
  CHECK(layer.periods.size() == 10);
  CHECK(layer.theta_max > layer.gate);

  // Periods tile the span without gaps or overlap.
  for (std::size_t i = 1; i < layer.periods.size(); ++i) CHECK(layer.periods[i].start_t == layer.periods[i - 1].end_t);
  CHECK(layer.periods.front().start_t == 0.0);
  CHECK(layer.periods.back().end_t == 80.0);
  for (const auto& p : layer.periods) {
    CHECK(std::abs(static_cast<double>(p.abstraction.size() - 1) - layer.period_length_knots) <= 1.0);
    CHECK(p.start_t < p.end_t);
  }
}

TEST_CASE("constant input has no significant period") {
  std::vector<InflectionPoint> k;
  for (int i = 0; i < 40; ++i) k.push_back({static_cast<double>(i), 2.0});
  CHECK(code_of([&] { detect_first_layer(AbstractSeries(k, 40), DetectionConfig{}); }) ==
        ErrorCode::NoSignificantPeriod);
}

TEST_CASE("too few knots") {
  std::vector<InflectionPoint> k;
  for (int i = 0; i < 12; ++i) k.push_back({static_cast<double>(i), static_cast<double>(i % 2)});
  CHECK(code_of([&] { detect_first_layer(AbstractSeries(k, 12), DetectionConfig{}); }) == ErrorCode::NotEnoughData);
}

TEST_CASE("noisy sine period recovery") {
  const auto s = synthetic::noisy_sine(50.0, 20, 20.0, 42);
  const auto a = compress(s, {});
  const auto model = detect_multi_layer(a, DetectionConfig{});
  REQUIRE(!model.layers.empty());
  CHECK(std::abs(model.layers[0].period_length_time - 50.0) <= 2.0);
  CHECK(model.layers.size() == 1);
}

TEST_CASE("white noise is rejected") {
  synthetic::Gaussian g(9);
  std::vector<InflectionPoint> k;
  for (int i = 0; i < 200; ++i) k.push_back({static_cast<double>(i), g()});
  CHECK(code_of([&] { detect_first_layer(AbstractSeries(k, 200), DetectionConfig{}); }) ==
        ErrorCode::NoSignificantPeriod);
}

TEST_CASE("detection is deterministic and offset invariant") {
  const auto a = eight_knot_cycles(12);
  const auto b = eight_knot_cycles(12, 100.0);
  const DetectionConfig cfg;
  const auto m1 = detect_multi_layer(a, cfg), m2 = detect_multi_layer(a, cfg), m3 = detect_multi_layer(b, cfg);
  REQUIRE(m1.layers.size() == m2.layers.size());
  REQUIRE(m1.layers.size() == m3.layers.size());
  for (std::size_t i = 0; i < m1.layers.size(); ++i) {
    CHECK(m1.layers[i].period_length_time == m2.layers[i].period_length_time);
    CHECK(m1.layers[i].theta_max == m2.layers[i].theta_max);
    CHECK(m1.layers[i].period_length_time == m3.layers[i].period_length_time);
    CHECK(m1.layers[i].periods.size() == m3.layers[i].periods.size());
  }
}

TEST_CASE("gaussian kernel and weights") {
  CHECK(gaussian_kernel(0, 0, 1) == doctest::Approx(1.0 / (2 * std::numbers::pi)));

  // Symmetric about its centroid: the middle knot keeps its value.
  Period p;
  p.abstraction = AbstractSeries({{0, -2}, {1, 1}, {2, 0}, {3, -1}, {4, 2}}, 5);
  p.start_t = 0;
  p.end_t = 4;
  const auto w = gaussian_weights(p);
  CHECK(w.abstraction[2].k == p.abstraction[2].k);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(w.abstraction[i].t == p.abstraction[i].t);
    CHECK(std::abs(w.abstraction[i].k) <= std::abs(p.abstraction[i].k));
  }

  Period flat;
  flat.abstraction = AbstractSeries({{0, 3}, {1, 3}, {2, 3}}, 3);
  flat.start_t = 0;
  flat.end_t = 2;
  CHECK(gaussian_weights(flat).abstraction == flat.abstraction);
}

TEST_CASE("weekly pattern nests days in weeks") {
  const auto s = synthetic::weekly(30, 7);
  const auto model = detect_multi_layer(compress(s, {}), DetectionConfig{});
  REQUIRE(model.layers.size() >= 2);
  CHECK(std::abs(model.layers[0].period_length_time - 24.0) <= 24.0 * 0.05);
  CHECK(std::abs(model.layers[1].period_length_time - 168.0) <= 168.0 * 0.05);
  for (std::size_t i = 1; i < model.layers.size(); ++i)
    CHECK(model.layers[i].period_length_time >= 2.0 * model.layers[i - 1].period_length_time);
}

TEST_CASE("config validation") {
  DetectionConfig c;
  c.mu = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.phi = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.min_periods = 1;
  CHECK_THROWS_AS(c.validate(), Error);
}
