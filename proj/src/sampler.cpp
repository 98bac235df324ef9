#include "svt/sampler.hpp"

#include <stdexcept>

namespace svt {

namespace {

double map_quantile(double q, const Range& range) {
  return range.lo + q * (range.hi - range.lo);
}

}  // namespace

int active_input_count(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAcc:
      return 6;
    case ScenarioKind::kLk:
      return 5;
    case ScenarioKind::kAccAndLk:
      return 10;
  }
  throw std::logic_error("unreachable scenario kind");
}

ConcreteScenario scenario_from_quantiles(ScenarioKind kind,
                                         const std::vector<double>& quantiles,
                                         std::uint64_t seed) {
  const std::size_t expected = static_cast<std::size_t>(active_input_count(kind));
  if (quantiles.size() != expected) {
    throw std::invalid_argument("scenario_from_quantiles: expected " +
                                std::to_string(expected) + " quantiles, got " +
                                std::to_string(quantiles.size()));
  }
  ConcreteScenario sc;
  sc.kind = kind;
  sc.seed = seed;
  std::size_t i = 0;
  if (kind_has_curvature(kind)) {
    sc.a0 = map_quantile(quantiles[i++], input_ranges::kA0);
    sc.a1 = map_quantile(quantiles[i++], input_ranges::kA1);
    sc.a2 = map_quantile(quantiles[i++], input_ranges::kA2);
    sc.a3 = map_quantile(quantiles[i++], input_ranges::kA3);
  }
  sc.v_ego = map_quantile(quantiles[i++], input_ranges::kVEgo);
  if (kind_has_co(kind)) {
    CoParams co;
    co.x_co = map_quantile(quantiles[i++], input_ranges::x_co(sc.v_ego));
    co.v_co = map_quantile(quantiles[i++], input_ranges::v_co(sc.v_ego));
    co.t_v_co = map_quantile(quantiles[i++], input_ranges::kTvCo);
    co.a_co = map_quantile(quantiles[i++], input_ranges::kACo);
    co.t_a_co = map_quantile(quantiles[i++], input_ranges::kTaCo);
    sc.co = co;
  }
  return sc;
}

ConcreteScenario sample_concrete(const SamplerConfig& config,
                                 std::uint64_t index) {
  if (index >= config.count) {
    throw std::out_of_range("sample_concrete: index " + std::to_string(index) +
                            " >= count " + std::to_string(config.count));
  }
  const std::uint64_t seed = record_seed(config.master_seed, index);
  SplitMix64 stream = substream(seed, StreamPurpose::kScenarioInputs);
  std::vector<double> quantiles(active_input_count(config.kind));
  for (double& q : quantiles) {
    q = stream.next_unit();
  }
  return scenario_from_quantiles(config.kind, quantiles, seed);
}

LaneNoise LaneNoise::draw(SplitMix64& stream) {
  LaneNoise noise;
  noise.width_offset =
      stream.next_uniform(-kLaneWidthNoiseBound, kLaneWidthNoiseBound);
  for (double& u : noise.center_offsets) {
    u = stream.next_uniform(-kLaneCenterNoiseBound, kLaneCenterNoiseBound);
  }
  return noise;
}

LaneGeometry lane_geometry_from_noise(const ConcreteScenario& scenario,
                                      const LaneNoise& noise) {
  LaneGeometry lanes;
  lanes.half_width = (kLaneWidthNominal + noise.width_offset) / 2.0;
  for (int i = 0; i < kLaneSampleCount; ++i) {
    const double x = lane_sample_x(i);
    lanes.sample_x[i] = x;
    lanes.center_y[i] =
        scenario.centerline_polynomial(x) + noise.center_offsets[i];
    lanes.left_y[i] = lanes.center_y[i] + lanes.half_width;
    lanes.right_y[i] = lanes.center_y[i] - lanes.half_width;
  }
  return lanes;
}

LaneGeometry sample_lane_geometry(const ConcreteScenario& scenario,
                                  SplitMix64& stream) {
  return lane_geometry_from_noise(scenario, LaneNoise::draw(stream));
}

LaneGeometry sample_lane_geometry(const ConcreteScenario& scenario) {
  SplitMix64 stream = substream(scenario.seed, StreamPurpose::kLaneNoise);
  return sample_lane_geometry(scenario, stream);
}

}  // namespace svt
