#include "svt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svt {

double ade(const Trajectory& predicted, const Trajectory& truth,
           std::size_t first_compared_index) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("ade: trajectory length mismatch");
  }
  if (first_compared_index >= predicted.size()) {
    throw std::invalid_argument("ade: nothing to compare");
  }
  double sum = 0.0;
  const std::size_t n = predicted.size();
  for (std::size_t k = first_compared_index; k < n; ++k) {
    const double dx = predicted[k].x - truth[k].x;
    const double dy = predicted[k].y - truth[k].y;
    sum += std::sqrt(dx * dx + dy * dy);
  }
  return sum / static_cast<double>(n - first_compared_index);
}

double min_acceleration(const Trajectory& traj) {
  if (traj.size() < 2) {
    throw std::invalid_argument("min_acceleration: needs >= 2 states");
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const double dt = traj[k + 1].t - traj[k].t;
    lowest = std::min(lowest, (traj[k + 1].speed - traj[k].speed) / dt);
  }
  return lowest;
}

double max_lateral_position(const Trajectory& traj) {
  if (traj.states.empty()) {
    throw std::invalid_argument("max_lateral_position: empty trajectory");
  }
  double highest = 0.0;
  for (const auto& s : traj.states) {
    highest = std::max(highest, std::abs(s.y));
  }
  return highest;
}

double min_distance(const Trajectory& ego, const Trajectory& co) {
  if (ego.size() != co.size()) {
    throw std::invalid_argument("min_distance: trajectory length mismatch");
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ego.size(); ++k) {
    if (ego[k].t != co[k].t) {
      throw std::invalid_argument("min_distance: timestamp mismatch");
    }
    const double dx = ego[k].x - co[k].x;
    const double dy = ego[k].y - co[k].y;
    lowest = std::min(lowest, std::sqrt(dx * dx + dy * dy));
  }
  return lowest;
}

double mae(const std::vector<double>& predicted_values,
           const std::vector<double>& true_values) {
  if (predicted_values.size() != true_values.size()) {
    throw std::invalid_argument("mae: length mismatch");
  }
  if (predicted_values.empty()) {
    throw std::invalid_argument("mae: empty lists");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted_values.size(); ++i) {
    sum += std::abs(predicted_values[i] - true_values[i]);
  }
  return sum / static_cast<double>(predicted_values.size());
}

EvaluationMetrics compute_metrics(const Trajectory& ego, const Trajectory* co) {
  EvaluationMetrics m;
  m.a_min = min_acceleration(ego);
  m.p_lat_max = max_lateral_position(ego);
  if (co != nullptr) {
    m.d_min = min_distance(ego, *co);
  }
  return m;
}

}  // namespace svt
