#include "svt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svt/metrics.hpp"

namespace svt {

namespace {

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

int SimParams::step_count() const {
  if (dt <= 0.0) {
    throw std::invalid_argument("SimParams: dt must be positive");
  }
  const double ratio = horizon / dt;
  const int steps = static_cast<int>(std::lround(ratio));
  if (steps < 1 || std::abs(ratio - steps) > 1e-9) {
    throw std::invalid_argument(
        "SimParams: horizon must be a whole number of steps");
  }
  return steps;
}

double co_speed_profile(double t, const ConcreteScenario& scenario) {
  if (!scenario.co.has_value()) {
    throw std::invalid_argument("co_speed_profile: scenario has no Co");
  }
  const CoParams& co = *scenario.co;
  if (t < co.t_v_co) {
    return co.v_co;
  }
  const double ramp_time = std::min(t - co.t_v_co, co.t_a_co);
  return std::max(0.0, co.v_co + co.a_co * ramp_time);
}

double acc_command(double gap, double v_ego, const SimParams& params) {
  const double raw = params.acc_gain * (gap - params.time_gap * v_ego);
  return std::clamp(raw, params.accel_min, params.accel_max);
}

double pure_pursuit_steer(const VehicleState& state, const CenterlinePath& path,
                          const SimParams& params) {
  const double lookahead =
      std::max(params.lookahead_min, params.lookahead_factor * state.speed);
  const Vec2 p{state.x, state.y};
  const Vec2 target = path.lookahead_point(p, path.project_arc(p), lookahead);
  const double alpha =
      wrap_angle(std::atan2(target.y - p.y, target.x - p.x) - state.heading);
  return std::atan(2.0 * params.wheelbase * std::sin(alpha) / lookahead);
}

SimNoise SimNoise::zero(int state_count, bool with_co) {
  SimNoise noise;
  noise.ego_heading.assign(state_count, 0.0);
  if (with_co) {
    noise.co_heading.assign(state_count, 0.0);
    noise.co_speed.assign(state_count, 0.0);
  }
  return noise;
}

SimNoise SimNoise::draw(SplitMix64& stream, int state_count, bool with_co,
                        const SimParams& params) {
  SimNoise noise;
  const double hb = params.orientation_noise_bound;
  noise.ego_heading.resize(state_count);
  for (double& u : noise.ego_heading) u = stream.next_uniform(-hb, hb);
  if (with_co) {
    noise.co_heading.resize(state_count);
    for (double& u : noise.co_heading) u = stream.next_uniform(-hb, hb);
    const double sb = params.co_speed_noise_bound;
    noise.co_speed.resize(state_count);
    for (double& u : noise.co_speed) u = stream.next_uniform(-sb, sb);
  }
  return noise;
}

SceneRecord simulate_with_noise(const ConcreteScenario& scenario,
                                const LaneGeometry& lanes,
                                const SimNoise& noise,
                                const SimParams& params) {
  if (params.accel_min >= 0.0 || params.accel_max <= 0.0) {
    throw std::invalid_argument(
        "SimParams: accel bounds must straddle zero");
  }
  const int steps = params.step_count();
  const int state_count = steps + 1;
  const bool with_co = scenario.co.has_value();
  if (static_cast<int>(noise.ego_heading.size()) != state_count ||
      (with_co &&
       (static_cast<int>(noise.co_heading.size()) != state_count ||
        static_cast<int>(noise.co_speed.size()) != state_count))) {
    throw std::invalid_argument("simulate: noise arrays sized wrongly");
  }

  const CenterlinePath path(lanes);

  SceneRecord record;
  record.scenario = scenario;
  record.lanes = lanes;
  record.ego.states.reserve(state_count);

  // Both vehicles start on the centerline, aligned with its tangent.
  double ego_x = params.ego_x0;
  double ego_y = path.y_at_x(ego_x);
  double ego_heading = path.heading_at_arc(path.arc_at_x(ego_x));
  double ego_speed = scenario.v_ego;

  double co_arc = 0.0;
  Vec2 co_pos{};
  double co_heading = 0.0;
  if (with_co) {
    record.co.emplace();
    record.co->states.reserve(state_count);
    co_arc = path.arc_at_x(scenario.co->x_co);
    co_pos = path.point_at_arc(co_arc);
    co_heading = path.heading_at_arc(co_arc);
  }

  for (int k = 0; k < state_count; ++k) {
    const double t = params.dt * k;
    record.ego.states.push_back({t, ego_x, ego_y,
                                 ego_heading + noise.ego_heading[k],
                                 ego_speed});
    double co_speed = 0.0;
    if (with_co) {
      co_speed = std::max(0.0, co_speed_profile(t, scenario) +
                                   noise.co_speed[k]);
      record.co->states.push_back({t, co_pos.x, co_pos.y,
                                   co_heading + noise.co_heading[k],
                                   co_speed});
    }
    if (k == steps) break;

    // Controls from the noise-free state.
    double accel = 0.0;  // LK holds constant speed
    if (with_co) {
      const double gap = std::hypot(co_pos.x - ego_x, co_pos.y - ego_y);
      accel = acc_command(gap, ego_speed, params);
    }
    const VehicleState ego_state{t, ego_x, ego_y, ego_heading, ego_speed};
    const double steer = pure_pursuit_steer(ego_state, path, params);

    // Kinematic bicycle, explicit Euler.
    ego_x += ego_speed * std::cos(ego_heading) * params.dt;
    ego_y += ego_speed * std::sin(ego_heading) * params.dt;
    ego_heading += ego_speed * std::tan(steer) / params.wheelbase * params.dt;
    ego_speed = std::max(0.0, ego_speed + accel * params.dt);

    if (with_co) {
      co_arc += co_speed * params.dt;
      co_pos = path.point_at_arc(co_arc);
      co_heading = path.heading_at_arc(co_arc);
    }
  }

  const Trajectory* co_traj = with_co ? &*record.co : nullptr;
  record.metrics = compute_metrics(record.ego, co_traj);
  return record;
}

SceneRecord simulate(const ConcreteScenario& scenario,
                     const LaneGeometry& lanes, SplitMix64& stream,
                     const SimParams& params) {
  const SimNoise noise = SimNoise::draw(stream, params.step_count() + 1,
                                        scenario.co.has_value(), params);
  return simulate_with_noise(scenario, lanes, noise, params);
}

SceneRecord simulate(const ConcreteScenario& scenario,
                     const LaneGeometry& lanes, const SimParams& params) {
  SplitMix64 stream = substream(scenario.seed, StreamPurpose::kSimNoise);
  return simulate(scenario, lanes, stream, params);
}

}  // namespace svt
