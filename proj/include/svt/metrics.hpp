#pragma once

#include <map>
#include <string>
#include <vector>

#include "svt/scenario.hpp"

namespace svt {

// Mean Euclidean distance between predicted and true positions over the
// compared states. The first two states are the known initial states fed
// to the predictor, so comparison starts at index 2 by default.
double ade(const Trajectory& predicted, const Trajectory& truth,
           std::size_t first_compared_index = 2);

// min over intervals of (speed[k+1] - speed[k]) / dt.
double min_acceleration(const Trajectory& traj);

// max over states of |y| in the world frame.
double max_lateral_position(const Trajectory& traj);

// min over shared timestamps of the Euclidean center distance.
double min_distance(const Trajectory& ego, const Trajectory& co);

// Mean absolute difference.
double mae(const std::vector<double>& predicted_values,
           const std::vector<double>& true_values);

// Ground-truth metrics of a simulated scene.
EvaluationMetrics compute_metrics(const Trajectory& ego,
                                  const Trajectory* co);

// Dataset-level error statistics: ADE plus named per-metric MAE entries
// with units in the key (e.g. "a_min[m/s^2]").
struct ErrorReport {
  double ade{0.0};
  std::map<std::string, double> metric_mae;
};

}  // namespace svt
