#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace svt {

// The three functional scenarios: car following on a straight road (ACC),
// lane keeping on a curved road (LK), and their combination.
enum class ScenarioKind { kAcc, kLk, kAccAndLk };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

// LK has no challenger vehicle; ACC has no lane curvature.
inline bool kind_has_co(ScenarioKind kind) { return kind != ScenarioKind::kLk; }
inline bool kind_has_curvature(ScenarioKind kind) {
  return kind != ScenarioKind::kAcc;
}

struct Range {
  double lo{0.0};
  double hi{0.0};
  bool contains(double v) const { return v >= lo && v <= hi; }
  double mid() const { return lo + 0.5 * (hi - lo); }
};

// Logical-scenario input ranges. Dependent ranges (x_co, v_co) are
// functions of the Ego's initial velocity.
namespace input_ranges {
inline constexpr Range kA0{-1.0, 1.0};
inline constexpr Range kA1{-0.1, 0.1};
inline constexpr Range kA2{-0.01, 0.01};
inline constexpr Range kA3{-0.001, 0.001};
inline constexpr Range kVEgo{8.0, 16.0};
inline constexpr Range kTvCo{0.0, 3.0};
inline constexpr Range kACo{-8.0, -1.0};
inline constexpr Range kTaCo{1.0, 3.0};
inline Range x_co(double v_ego) { return {-50.0 + v_ego, -50.0 + 2.0 * v_ego}; }
inline Range v_co(double v_ego) { return {v_ego - 4.0, v_ego + 4.0}; }
}  // namespace input_ranges

// Challenger (Co) inputs; absent for LK.
struct CoParams {
  double x_co{0.0};    // initial x-coordinate in m
  double v_co{0.0};    // initial velocity in m/s
  double t_v_co{0.0};  // duration of constant velocity in s
  double a_co{0.0};    // acceleration in m/s^2 (negative: deceleration)
  double t_a_co{0.0};  // duration of acceleration in s
};

// One sampled parameterization of a logical scenario.
struct ConcreteScenario {
  ScenarioKind kind{ScenarioKind::kAcc};
  double a0{0.0};  // lane-center polynomial coefficients, zero for ACC
  double a1{0.0};
  double a2{0.0};
  double a3{0.0};
  double v_ego{0.0};  // Ego initial velocity in m/s
  std::optional<CoParams> co;
  std::uint64_t seed{0};  // per-record noise seed

  double centerline_polynomial(double x) const {
    return a0 + x * (a1 + x * (a2 + x * a3));
  }
};

inline constexpr int kLaneSampleCount = 25;
inline constexpr double kLaneXStart = -55.0;
inline constexpr double kLaneXSpan = 110.0;
inline constexpr double kLaneWidthNominal = 3.5;
inline constexpr double kLaneCenterNoiseBound = 0.5;
inline constexpr double kLaneWidthNoiseBound = 0.3;

inline double lane_sample_x(int i) {
  return kLaneXStart + kLaneXSpan / (kLaneSampleCount - 1) * i;
}

// Noisy lane boundaries sampled at 25 fixed longitudinal stations.
struct LaneGeometry {
  std::array<double, kLaneSampleCount> sample_x{};
  std::array<double, kLaneSampleCount> center_y{};
  double half_width{0.0};  // (3.5 m + width noise) / 2
  std::array<double, kLaneSampleCount> left_y{};
  std::array<double, kLaneSampleCount> right_y{};
};

struct VehicleState {
  double t{0.0};        // s
  double x{0.0};        // m
  double y{0.0};        // m
  double heading{0.0};  // rad
  double speed{0.0};    // m/s
};

inline constexpr int kTrajectoryLength = 26;
inline constexpr double kTimeStep = 0.2;
inline constexpr double kHorizon = 5.0;

// Time-indexed vehicle states at t = 0.0, 0.2, ..., 5.0 s.
struct Trajectory {
  std::vector<VehicleState> states;

  std::size_t size() const { return states.size(); }
  const VehicleState& operator[](std::size_t i) const { return states[i]; }
  VehicleState& operator[](std::size_t i) { return states[i]; }
};

struct EvaluationMetrics {
  double a_min{0.0};      // Ego's minimum acceleration in m/s^2
  double p_lat_max{0.0};  // Ego's maximum |y| in m (world frame)
  std::optional<double> d_min;  // minimum Ego-Co center distance in m
};

// One executed scenario: inputs, road, ground-truth trajectories, metrics.
struct SceneRecord {
  ConcreteScenario scenario;
  LaneGeometry lanes;
  Trajectory ego;
  std::optional<Trajectory> co;
  EvaluationMetrics metrics;
};

// Checks every scenario_model invariant. Violations are data, not
// failures: an empty list means the record is well formed.
std::vector<std::string> validate(const SceneRecord& record);

}  // namespace svt
