#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "svt/rng.hpp"
#include "svt/scenario.hpp"

namespace svt {

struct SamplerConfig {
  ScenarioKind kind{ScenarioKind::kAcc};
  std::uint64_t master_seed{0};
  std::uint64_t count{1};
};

// Number of active logical-scenario inputs for a kind (ACC 6, LK 5,
// ACC&LK 10).
int active_input_count(ScenarioKind kind);

// Maps uniform quantiles in [0,1] onto the active input ranges, in
// Table-row order: a0..a3 (curved kinds), v_ego, then x_co, v_co, t_v_co,
// a_co, t_a_co (kinds with a Co). Dependent ranges use the already-mapped
// v_ego. Exposed so tests can force specific quantiles.
ConcreteScenario scenario_from_quantiles(ScenarioKind kind,
                                         const std::vector<double>& quantiles,
                                         std::uint64_t seed);

// Deterministic function of (master_seed, index).
ConcreteScenario sample_concrete(const SamplerConfig& config,
                                 std::uint64_t index);

// Lane noise as explicit values, so simulations and tests can run with
// noise forced to zero.
struct LaneNoise {
  double width_offset{0.0};                             // U(-0.3, 0.3)
  std::array<double, kLaneSampleCount> center_offsets{};  // U(-0.5, 0.5)

  static LaneNoise zero() { return {}; }
  // Draw order: width first, then the 25 center offsets.
  static LaneNoise draw(SplitMix64& stream);
};

LaneGeometry lane_geometry_from_noise(const ConcreteScenario& scenario,
                                      const LaneNoise& noise);

LaneGeometry sample_lane_geometry(const ConcreteScenario& scenario,
                                  SplitMix64& stream);

// Convenience: lane substream keyed by the scenario's own seed.
LaneGeometry sample_lane_geometry(const ConcreteScenario& scenario);

}  // namespace svt
