#pragma once

#include <vector>

#include "svt/path.hpp"
#include "svt/rng.hpp"
#include "svt/sampler.hpp"
#include "svt/scenario.hpp"

namespace svt {

inline constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct SimParams {
  double dt{kTimeStep};
  double horizon{kHorizon};
  double acc_gain{0.3};   // 1/s^2, P-controller on gap error
  double time_gap{2.0};   // s, ACC setpoint
  double accel_min{-8.0};
  double accel_max{2.0};
  double wheelbase{2.8};
  double lookahead_min{5.0};
  double lookahead_factor{0.5};  // s, lookahead grows with speed
  double ego_x0{-50.0};
  double orientation_noise_bound{deg_to_rad(2.9)};
  double co_speed_noise_bound{0.1};

  // Number of integration steps; horizon must be a whole number of steps.
  int step_count() const;
};

// Co speed setpoint: constant, then ramp for t_a_co, then held. Never
// negative.
double co_speed_profile(double t, const ConcreteScenario& scenario);

// Clamped P-control on the 2 s time-gap error.
double acc_command(double gap, double v_ego, const SimParams& params);

// Pure-pursuit steering on a kinematic bicycle: the goal point is the
// first centerline point at Euclidean distance L ahead of the vehicle,
// L = max(lookahead_min, lookahead_factor * speed).
double pure_pursuit_steer(const VehicleState& state, const CenterlinePath& path,
                          const SimParams& params);

// Per-step noise as explicit values so tests can force them to zero.
// Heading noise perturbs logged headings only; speed noise perturbs the
// Co's integrated speed.
struct SimNoise {
  std::vector<double> ego_heading;
  std::vector<double> co_heading;
  std::vector<double> co_speed;

  static SimNoise zero(int state_count, bool with_co);
  // Draw order: ego headings, then Co headings, then Co speeds.
  static SimNoise draw(SplitMix64& stream, int state_count, bool with_co,
                       const SimParams& params);
};

SceneRecord simulate_with_noise(const ConcreteScenario& scenario,
                                const LaneGeometry& lanes,
                                const SimNoise& noise,
                                const SimParams& params = {});

SceneRecord simulate(const ConcreteScenario& scenario,
                     const LaneGeometry& lanes, SplitMix64& stream,
                     const SimParams& params = {});

// Convenience: sim substream keyed by the scenario's own seed.
SceneRecord simulate(const ConcreteScenario& scenario,
                     const LaneGeometry& lanes, const SimParams& params = {});

}  // namespace svt
