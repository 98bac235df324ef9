#include "svt/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "svt/metrics.hpp"

namespace svt {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAcc:
      return "ACC";
    case ScenarioKind::kLk:
      return "LK";
    case ScenarioKind::kAccAndLk:
      return "ACC_AND_LK";
  }
  throw std::logic_error("unreachable scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "ACC") return ScenarioKind::kAcc;
  if (name == "LK") return ScenarioKind::kLk;
  if (name == "ACC_AND_LK") return ScenarioKind::kAccAndLk;
  throw std::invalid_argument("unknown scenario kind: " + name);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_range(const std::string& name, double value, const Range& range,
                 std::vector<std::string>& out) {
  if (!range.contains(value)) {
    std::ostringstream os;
    os << name << " outside [" << fmt(range.lo) << "," << fmt(range.hi) << "]";
    out.push_back(os.str());
  }
}

void check_scenario(const ConcreteScenario& sc, std::vector<std::string>& out) {
  if (kind_has_curvature(sc.kind)) {
    check_range("a0", sc.a0, input_ranges::kA0, out);
    check_range("a1", sc.a1, input_ranges::kA1, out);
    check_range("a2", sc.a2, input_ranges::kA2, out);
    check_range("a3", sc.a3, input_ranges::kA3, out);
  } else if (sc.a0 != 0.0 || sc.a1 != 0.0 || sc.a2 != 0.0 || sc.a3 != 0.0) {
    out.push_back("ACC scenario has nonzero lane polynomial coefficients");
  }
  check_range("v_ego", sc.v_ego, input_ranges::kVEgo, out);
  if (kind_has_co(sc.kind)) {
    if (!sc.co.has_value()) {
      out.push_back(to_string(sc.kind) + " scenario missing Co inputs");
      return;
    }
    check_range("x_co", sc.co->x_co, input_ranges::x_co(sc.v_ego), out);
    check_range("v_co", sc.co->v_co, input_ranges::v_co(sc.v_ego), out);
    check_range("t_v_co", sc.co->t_v_co, input_ranges::kTvCo, out);
    check_range("a_co", sc.co->a_co, input_ranges::kACo, out);
    check_range("t_a_co", sc.co->t_a_co, input_ranges::kTaCo, out);
  } else if (sc.co.has_value()) {
    out.push_back("LK scenario carries Co inputs");
  }
}

void check_lanes(const ConcreteScenario& sc, const LaneGeometry& lanes,
                 std::vector<std::string>& out) {
  for (int i = 0; i < kLaneSampleCount; ++i) {
    if (lanes.sample_x[i] != lane_sample_x(i)) {
      out.push_back("sample_x[" + std::to_string(i) + "] off the fixed grid");
      break;
    }
  }
  for (int i = 0; i < kLaneSampleCount; ++i) {
    if (lanes.left_y[i] != lanes.center_y[i] + lanes.half_width ||
        lanes.right_y[i] != lanes.center_y[i] - lanes.half_width) {
      out.push_back("lane boundaries do not match center_y +/- half_width");
      break;
    }
  }
  for (int i = 0; i < kLaneSampleCount; ++i) {
    const double poly = sc.centerline_polynomial(lanes.sample_x[i]);
    if (std::abs(lanes.center_y[i] - poly) > kLaneCenterNoiseBound) {
      out.push_back("center_y[" + std::to_string(i) +
                    "] deviates more than 0.5 m from the lane polynomial");
      break;
    }
  }
  if (std::abs(2.0 * lanes.half_width - kLaneWidthNominal) >
      kLaneWidthNoiseBound) {
    out.push_back("lane width outside 3.5 m +/- 0.3 m");
  }
}

void check_trajectory(const std::string& label, const Trajectory& traj,
                      std::vector<std::string>& out) {
  if (traj.size() != kTrajectoryLength) {
    out.push_back(label + " trajectory length " + std::to_string(traj.size()) +
                  " != " + std::to_string(kTrajectoryLength));
    return;
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (std::abs(traj[k].t - kTimeStep * static_cast<double>(k)) > 1e-12) {
      out.push_back(label + " trajectory timestamps off the 0.2 s grid");
      break;
    }
  }
  for (const auto& s : traj.states) {
    if (s.speed < 0.0) {
      out.push_back(label + " trajectory has negative speed");
      break;
    }
  }
}

}  // namespace

std::vector<std::string> validate(const SceneRecord& record) {
  std::vector<std::string> out;
  check_scenario(record.scenario, out);
  check_lanes(record.scenario, record.lanes, out);
  check_trajectory("ego", record.ego, out);
  if (kind_has_co(record.scenario.kind)) {
    if (!record.co.has_value()) {
      out.push_back(to_string(record.scenario.kind) +
                    " record missing Co trajectory");
    } else {
      check_trajectory("co", *record.co, out);
    }
  } else if (record.co.has_value()) {
    out.push_back("LK record carries a Co trajectory");
  }
  if (record.metrics.p_lat_max < 0.0) {
    out.push_back("p_lat_max negative");
  }
  if (record.metrics.d_min.has_value() && *record.metrics.d_min < 0.0) {
    out.push_back("d_min negative");
  }

  // Metrics must be recomputable from the stored trajectories, exactly.
  const bool traj_ok =
      record.ego.size() == kTrajectoryLength &&
      (!record.co.has_value() || record.co->size() == kTrajectoryLength);
  if (traj_ok) {
    const Trajectory* co = record.co.has_value() ? &*record.co : nullptr;
    try {
      const EvaluationMetrics recomputed = compute_metrics(record.ego, co);
      if (recomputed.a_min != record.metrics.a_min ||
          recomputed.p_lat_max != record.metrics.p_lat_max ||
          recomputed.d_min != record.metrics.d_min) {
        out.push_back("stored metrics do not match recomputation");
      }
    } catch (const std::exception& e) {
      out.push_back(std::string("metrics not recomputable: ") + e.what());
    }
  }
  return out;
}

}  // namespace svt
