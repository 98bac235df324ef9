#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "svt/sampler.hpp"

using namespace svt;

TEST_CASE("all-midpoint quantiles map to the range midpoints") {
  // Expected values computed by hand from the input ranges before the
  // sampler was written: midpoint of [lo, hi] is lo + 0.5 (hi - lo).
  const std::vector<double> mid(10, 0.5);
  const ConcreteScenario sc =
      scenario_from_quantiles(ScenarioKind::kAccAndLk, mid, 1);
  CHECK(sc.a0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sc.a1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sc.a2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sc.a3 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sc.v_ego == doctest::Approx(12.0));
  // x_co range is [-50 + 12, -50 + 24] = [-38, -26]; its midpoint is -32.
  CHECK(sc.co->x_co == doctest::Approx(-32.0));
  CHECK(sc.co->v_co == doctest::Approx(12.0));
  CHECK(sc.co->t_v_co == doctest::Approx(1.5));
  CHECK(sc.co->a_co == doctest::Approx(-4.5));
  CHECK(sc.co->t_a_co == doctest::Approx(2.0));
}

TEST_CASE("ACC has a straight road and LK has no Co") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ConcreteScenario acc =
        sample_concrete({ScenarioKind::kAcc, 5, 50}, i);
    CHECK(acc.a0 == 0.0);
    CHECK(acc.a1 == 0.0);
    CHECK(acc.a2 == 0.0);
    CHECK(acc.a3 == 0.0);
    CHECK(acc.co.has_value());

    const ConcreteScenario lk = sample_concrete({ScenarioKind::kLk, 5, 50}, i);
    CHECK(!lk.co.has_value());
  }
}

TEST_CASE("index out of range is rejected") {
  CHECK_THROWS_AS(sample_concrete({ScenarioKind::kAcc, 5, 10}, 10),
                  std::out_of_range);
}

TEST_CASE("lane geometry with zero noise follows the polynomial") {
  ConcreteScenario sc;
  sc.kind = ScenarioKind::kLk;
  sc.a0 = 1.0;
  const LaneGeometry constant = lane_geometry_from_noise(sc, LaneNoise::zero());
  for (int i = 0; i < kLaneSampleCount; ++i) {
    CHECK(constant.center_y[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(constant.left_y[i] == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(constant.right_y[i] == doctest::Approx(-0.75).epsilon(1e-12));
  }
  CHECK(2.0 * constant.half_width == doctest::Approx(3.5));

  sc.a0 = 0.0;
  sc.a1 = 0.1;
  const LaneGeometry linear = lane_geometry_from_noise(sc, LaneNoise::zero());
  // x = 10 is not a sample station; check via the polynomial directly and
  // at the nearest stations.
  CHECK(sc.centerline_polynomial(10.0) == doctest::Approx(1.0));
  for (int i = 0; i < kLaneSampleCount; ++i) {
    CHECK(linear.center_y[i] ==
          doctest::Approx(0.1 * linear.sample_x[i]).epsilon(1e-12));
  }
}

TEST_CASE("sample stations are the fixed 25-point grid") {
  CHECK(lane_sample_x(0) == doctest::Approx(-55.0));
  CHECK(lane_sample_x(12) == doctest::Approx(0.0));
  CHECK(lane_sample_x(24) == doctest::Approx(55.0));
}

TEST_CASE("sampling is bit-deterministic") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const ConcreteScenario a =
        sample_concrete({ScenarioKind::kAccAndLk, 99, 10}, i);
    const ConcreteScenario b =
        sample_concrete({ScenarioKind::kAccAndLk, 99, 10}, i);
    CHECK(a.a0 == b.a0);
    CHECK(a.v_ego == b.v_ego);
    CHECK(a.co->x_co == b.co->x_co);
    CHECK(a.seed == b.seed);
    const LaneGeometry la = sample_lane_geometry(a);
    const LaneGeometry lb = sample_lane_geometry(b);
    CHECK(la.center_y == lb.center_y);
    CHECK(la.half_width == lb.half_width);
  }
}

TEST_CASE("10k samples cover every range to within 2%") {
  const std::size_t n = 10000;
  const SamplerConfig config{ScenarioKind::kAccAndLk, 2024, n};
  double lo_v = 1e30, hi_v = -1e30;
  double lo_a0 = 1e30, hi_a0 = -1e30;
  double lo_a3 = 1e30, hi_a3 = -1e30;
  double lo_tv = 1e30, hi_tv = -1e30;
  double lo_ac = 1e30, hi_ac = -1e30;
  double lo_ta = 1e30, hi_ta = -1e30;
  double lo_k = 1e30, hi_k = -1e30;    // (x_co + 50) / v_ego in [1, 2]
  double lo_dv = 1e30, hi_dv = -1e30;  // v_co - v_ego in [-4, 4]
  for (std::size_t i = 0; i < n; ++i) {
    const ConcreteScenario sc = sample_concrete(config, i);
    lo_v = std::min(lo_v, sc.v_ego);
    hi_v = std::max(hi_v, sc.v_ego);
    lo_a0 = std::min(lo_a0, sc.a0);
    hi_a0 = std::max(hi_a0, sc.a0);
    lo_a3 = std::min(lo_a3, sc.a3);
    hi_a3 = std::max(hi_a3, sc.a3);
    lo_tv = std::min(lo_tv, sc.co->t_v_co);
    hi_tv = std::max(hi_tv, sc.co->t_v_co);
    lo_ac = std::min(lo_ac, sc.co->a_co);
    hi_ac = std::max(hi_ac, sc.co->a_co);
    lo_ta = std::min(lo_ta, sc.co->t_a_co);
    hi_ta = std::max(hi_ta, sc.co->t_a_co);
    const double k = (sc.co->x_co + 50.0) / sc.v_ego;
    lo_k = std::min(lo_k, k);
    hi_k = std::max(hi_k, k);
    lo_dv = std::min(lo_dv, sc.co->v_co - sc.v_ego);
    hi_dv = std::max(hi_dv, sc.co->v_co - sc.v_ego);
  }
  const auto covers = [](double lo, double hi, const Range& range) {
    const double slack = 0.02 * (range.hi - range.lo);
    return lo <= range.lo + slack && hi >= range.hi - slack && lo >= range.lo &&
           hi <= range.hi;
  };
  CHECK(covers(lo_v, hi_v, input_ranges::kVEgo));
  CHECK(covers(lo_a0, hi_a0, input_ranges::kA0));
  CHECK(covers(lo_a3, hi_a3, input_ranges::kA3));
  CHECK(covers(lo_tv, hi_tv, input_ranges::kTvCo));
  CHECK(covers(lo_ac, hi_ac, input_ranges::kACo));
  CHECK(covers(lo_ta, hi_ta, input_ranges::kTaCo));
  CHECK(covers(lo_k, hi_k, Range{1.0, 2.0}));
  CHECK(covers(lo_dv, hi_dv, Range{-4.0, 4.0}));
}

TEST_CASE("dependent ranges hold for every sample") {
  const SamplerConfig config{ScenarioKind::kAcc, 31337, 2000};
  for (std::size_t i = 0; i < 2000; ++i) {
    const ConcreteScenario sc = sample_concrete(config, i);
    CHECK(sc.co->x_co >= -50.0 + sc.v_ego);
    CHECK(sc.co->x_co <= -50.0 + 2.0 * sc.v_ego);
    CHECK(sc.co->v_co >= sc.v_ego - 4.0);
    CHECK(sc.co->v_co <= sc.v_ego + 4.0);
  }
}

TEST_CASE("lane noise stays inside the stated bounds") {
  SplitMix64 stream(5);
  for (int rep = 0; rep < 200; ++rep) {
    const LaneNoise noise = LaneNoise::draw(stream);
    CHECK(std::abs(noise.width_offset) <= 0.3);
    for (double u : noise.center_offsets) {
      CHECK(std::abs(u) <= 0.5);
    }
  }
}
