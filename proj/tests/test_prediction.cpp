#include <cmath>
#include <random>

#include "doctest.h"
#include "tsperiod/compression.hpp"
#include "tsperiod/error.hpp"
#include "tsperiod/prediction.hpp"
#include "tsperiod/synthetic.hpp"

using namespace tsperiod;

namespace {

Period make_period(std::vector<InflectionPoint> knots, std::size_t ordinal) {
  Period p;
  p.start_t = knots.front().t;
  p.end_t = knots.back().t;
  p.abstraction = AbstractSeries(std::move(knots), 1000);
  p.ordinal = ordinal;
  return p;
}

PeriodicLayer layer_of(std::vector<Period> periods) {
  PeriodicLayer l;
  l.periods = std::move(periods);
  l.period_length_time = l.periods.front().end_t - l.periods.front().start_t;
  l.period_length_knots = static_cast<double>(l.periods.front().abstraction.size() - 1);
  return l;
}

MultiLayerModel model_of(PeriodicLayer layer) {
  MultiLayerModel m;
  std::vector<InflectionPoint> all;
  for (const auto& p : layer.periods)
    for (const auto& k : p.abstraction.knots())
      if (all.empty() || k.t > all.back().t) all.push_back(k);
  m.source = AbstractSeries(all, 1000);
  m.layers.push_back(std::move(layer));
  return m;
}

}  // namespace

TEST_CASE("attenuation weights") {
  CHECK(attenuation_weights(1) == std::vector<double>{1.0});
  const auto w2 = attenuation_weights(2);
  CHECK(w2[0] == doctest::Approx(0.3775).epsilon(1e-4));
  CHECK(w2[1] == doctest::Approx(0.6225).epsilon(1e-4));
  for (std::size_t t = 1; t < 200; t += 7) {
    const auto w = attenuation_weights(t);
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i] > 0);
      if (i) CHECK(w[i] >= w[i - 1]);
      s += w[i];
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(attenuation_weights(0), Error);
}

TEST_CASE("layer components") {
  const auto zero = make_period({{0, 0}, {1, 0}, {2, 0}}, 0);
  const auto one = make_period({{2, 1}, {3, 1}, {4, 1}}, 1);
  const auto c = predict_layer_component(layer_of({zero, one}), 5);
  REQUIRE(c.size() == 5);
  for (const auto& k : c) CHECK(k.k == doctest::Approx(std::exp(0.0) / (std::exp(-0.5) + 1.0)));
  CHECK(c.front().t == 0.0);
  CHECK(c.back().t == 1.0);

  const auto single = predict_layer_component(layer_of({make_period({{0, 2}, {1, 5}, {2, -1}}, 0)}), 3);
  CHECK(single[0].k == 2);
  CHECK(single[1].k == 5);
  CHECK(single[2].k == -1);

  std::vector<Period> same;
  for (std::size_t i = 0; i < 6; ++i) {
    const double t0 = 4.0 * static_cast<double>(i);
    same.push_back(make_period({{t0, 1}, {t0 + 1, 3}, {t0 + 3, -2}, {t0 + 4, 1}}, i));
  }
  const auto s = predict_layer_component(layer_of(same), 9);
  for (const auto& k : s) CHECK(k.k == doctest::Approx(skyline_value(same[0].abstraction.knots(), k.t * 4.0)).epsilon(1e-12));
}

TEST_CASE("fit_period") {
  auto f = fit_period(std::vector<InflectionPoint>{{0, 0}, {10, 10}}, 1.0);
  REQUIRE(f.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(f[i].x == doctest::Approx(static_cast<double>(i)));

  f = fit_period(std::vector<InflectionPoint>{{0, 0}, {2, 4}, {4, 0}}, 1.0);
  REQUIRE(f.size() == 5);
  const double expect[] = {0, 2, 4, 2, 0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(f[i].x == doctest::Approx(expect[i]));

  f = fit_period(std::vector<InflectionPoint>{{0, 1}, {3, 2}}, 10.0);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == TimePoint{0, 1});
  CHECK(f[1] == TimePoint{3, 2});
}

TEST_CASE("predict_next_period errors") {
  MultiLayerModel empty;
  CHECK_THROWS_AS(predict_next_period(empty, 1.0), Error);
  const auto m = model_of(layer_of({make_period({{0, 0}, {1, 1}, {2, 0}}, 0)}));
  CHECK_THROWS_AS(predict_next_period(m, 0.0), Error);
  CHECK_THROWS_AS(predict_next_period(m, -1.0), Error);
}

TEST_CASE("single period copies forward") {
  const auto m = model_of(layer_of({make_period({{0, 0}, {1, 3}, {2, 1}, {3, 0}}, 0)}));
  const auto r = predict_next_period(m, 0.5);
  CHECK(r.horizon_start == 3.0);
  CHECK(r.horizon_end == 6.0);
  CHECK(r.fitted.size() == 7);
  for (const auto& p : r.fitted.points())
    CHECK(p.x == doctest::Approx(skyline_value(m.layers[0].periods[0].abstraction.knots(), p.t - 3.0)).epsilon(1e-12));
}

TEST_CASE("fitted series passes through predicted knots") {
  std::vector<Period> ps;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < 5; ++i) {
    const double t0 = 10.0 * static_cast<double>(i);
    ps.push_back(make_period({{t0, g(rng)}, {t0 + 3, g(rng)}, {t0 + 7, g(rng)}, {t0 + 10, g(rng)}}, i));
  }
  const auto r = predict_next_period(model_of(layer_of(ps)), 0.25);
  for (const auto& k : r.predicted_inflections) {
    const auto& pts = r.fitted.points();
    auto it = std::find_if(pts.begin(), pts.end(), [&](const TimePoint& p) { return std::abs(p.t - k.t) < 1e-12; });
    if (it != pts.end()) CHECK(it->x == doctest::Approx(k.k).epsilon(1e-12));
  }
  CHECK(r.fitted.points().back().t == r.predicted_inflections.back().t);
}

TEST_CASE("convexity on random models") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t periods = 2 + rng() % 6, knots = 3 + rng() % 5;
    std::vector<Period> ps;
    for (std::size_t i = 0; i < periods; ++i) {
      std::vector<InflectionPoint> k;
      const double t0 = 100.0 * static_cast<double>(i);
      for (std::size_t j = 0; j < knots; ++j) k.push_back({t0 + 100.0 * static_cast<double>(j) / (knots - 1), g(rng)});
      ps.push_back(make_period(k, i));
    }
    const auto layer = layer_of(ps);
    const auto comp = predict_layer_component(layer, knots);
    for (const auto& c : comp) {
      double lo = 1e300, hi = -1e300;
      for (const auto& p : ps) {
        const double v = skyline_value(p.abstraction.knots(), p.start_t + c.t * (p.end_t - p.start_t));
        lo = std::min(lo, v), hi = std::max(hi, v);
      }
      CHECK(c.k >= lo - 1e-12);
      CHECK(c.k <= hi + 1e-12);
    }
  }
}
