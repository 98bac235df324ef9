#pragma once

#include <map>
#include <string>
#include <vector>

#include "svt/metrics.hpp"
#include "svt/predictor.hpp"

namespace svt {

// Predicted Ego trajectory for one record: vectorize, forward,
// reconstruct back to world coordinates.
Trajectory predict_trajectory(const PredictorModel& model,
                              const SceneRecord& record);

// Evaluation metrics derived from a prediction: a_min and p_lat_max from
// the reconstructed Ego trajectory, d_min against the record's own Co.
EvaluationMetrics predicted_metrics(const Trajectory& predicted,
                                    const SceneRecord& record);

// ADE plus per-metric MAEs of a model over a test pool. The metric keys
// carry units, matching metric_output_names for the pool's kind.
ErrorReport evaluate_pool(const PredictorModel& model,
                          const std::vector<SceneRecord>& pool);

// Serial reference for the OpenMP kernel above.
ErrorReport evaluate_pool_serial(const PredictorModel& model,
                                 const std::vector<SceneRecord>& pool);

}  // namespace svt
