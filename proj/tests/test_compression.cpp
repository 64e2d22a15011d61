#include <algorithm>
#include <random>

#include "doctest.h"
#include "tsperiod/compression.hpp"
#include "tsperiod/error.hpp"
#include "tsperiod/evaluation.hpp"
#include "tsperiod/synthetic.hpp"

using namespace tsperiod;

namespace {

TimeSeries series_of(std::vector<double> xs) {
  std::vector<TimePoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({static_cast<double>(i), xs[i]});
  return validate_series(pts);
}

std::vector<InflectionPoint> K(std::initializer_list<std::pair<double, double>> tk) {
  std::vector<InflectionPoint> out;
  for (auto [t, k] : tk) out.push_back({t, k});
  return out;
}

const CompressionConfig kDefault{};

}  // namespace

TEST_CASE("inclination") {
  CHECK(inclination({0, 1}, {1, 3}) == 2.0);
  CHECK(inclination({0, 2}, {5, 2}) == 0.0);
  CHECK(inclination({1, 4}, {2, 1}) == -3.0);
  try {
    inclination({1, 0}, {1, 2});
    FAIL("expected DegenerateSegment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSegment);
  }
}

TEST_CASE("mark_inflections examples") {
  CHECK(mark_inflections(series_of({0, 1, 2, 3})).knots() == K({{0, 0}, {3, 3}}));
  CHECK(mark_inflections(series_of({0, 1, 2, 1})).knots() == K({{0, 0}, {2, 2}, {3, 1}}));
  CHECK(mark_inflections(series_of({0, 1, 0, 1, 0})).knots() == K({{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}}));
}

TEST_CASE("flat runs mark only entry and exit") {
  const auto a = mark_inflections(series_of({0, 1, 1, 1, 1, 0}));
  CHECK(a.knots() == K({{0, 0}, {1, 1}, {4, 1}, {5, 0}}));
  CHECK(compress(series_of({3, 3, 3, 3, 3, 3}), kDefault).size() == 2);
}

TEST_CASE("is_pseudo examples") {
  CHECK(is_pseudo({0, 0}, {9, 0.9}, {10, 1.0}, kDefault));
  CHECK_FALSE(is_pseudo({0, 0}, {1, 1}, {2, 2}, kDefault));
  CHECK_FALSE(is_pseudo({0, 0}, {1, 5}, {10, 0.2}, kDefault));
  CHECK_THROWS_AS(is_pseudo({0, 0}, {0, 1}, {2, 2}, kDefault), Error);
}

TEST_CASE("prune_pseudo examples") {
  const AbstractSeries with_pseudo(K({{0, 0}, {9, 0.9}, {10, 1.0}, {11, 0}}), 12);
  const auto pruned = prune_pseudo(with_pseudo, kDefault);
  CHECK(pruned.size() == with_pseudo.size() - 1);
  CHECK(pruned.knots() == K({{0, 0}, {10, 1.0}, {11, 0}}));

  const AbstractSeries two(K({{0, 0}, {5, 1}}), 6);
  CHECK(prune_pseudo(two, kDefault) == two);

  // Collinear knots whose first gap dominates: each middle point falls in turn
  // and the window re-anchors on the surviving left knot.
  const AbstractSeries chain(K({{0, 0}, {90, 90}, {99, 99}, {100, 100}, {101, 101}}), 102);
  const auto c = prune_pseudo(chain, kDefault);
  CHECK(c.knots() == K({{0, 0}, {101, 101}}));
}

TEST_CASE("triangle wave of 4 periods compresses to 9 knots") {
  const auto tri = synthetic::triangle_wave(25.0, 100);
  CHECK(compress(tri, kDefault).size() == 9);
}

TEST_CASE("compression properties on random series") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> xs(200);
    double v = 0;
    for (auto& x : xs) x = (v += g(rng));
    const auto s = series_of(xs);
    const auto a = compress(s, kDefault);

    // Every knot is a raw point, and the endpoints are kept.
    for (const auto& k : a.knots()) {
      const auto idx = static_cast<std::size_t>(k.t);
      CHECK(s[idx].t == k.t);
      CHECK(s[idx].x == k.k);
    }
    CHECK(a.start_t() == s[0].t);
    CHECK(a.end_t() == s[s.size() - 1].t);

    // Stricter thresholds never shrink the output.
    std::size_t prev = 0;
    for (double th : {0.5, 0.75, 0.85, 0.95, 1.0}) {
      const auto m = compress(s, {th, th}).size();
      CHECK(m >= prev);
      prev = m;
    }

    // Re-marking the skyline sampled only at its knots gives the knots back.
    const auto marked = mark_inflections(s);
    const auto again = mark_inflections(validate_series(to_points(marked.knots())));
    CHECK(again.knots() == marked.knots());

    // Global extremes survive.
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double kmin = 1e300, kmax = -1e300;
    for (const auto& k : a.knots()) kmin = std::min(kmin, k.k), kmax = std::max(kmax, k.k);
    CHECK(kmin == *mn);
    CHECK(kmax == *mx);
  }
}

TEST_CASE("piecewise-linear input is recovered exactly") {
  const auto s = synthetic::zigzag(10000, 10, 5);
  const auto a = compress(s, kDefault);
  CHECK(a.size() <= 12);
  CHECK(extraction_accuracy(s, a) == 1.0);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(CompressionConfig({0.0, 0.5}).validate(), Error);
  CHECK_THROWS_AS(CompressionConfig({0.5, 1.5}).validate(), Error);
  CHECK_NOTHROW(CompressionConfig({1.0, 1.0}).validate());
}
