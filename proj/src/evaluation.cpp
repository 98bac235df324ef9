#include "svt/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "svt/metamodel.hpp"

namespace svt {

Trajectory predict_trajectory(const PredictorModel& model,
                              const SceneRecord& record) {
  const VectorizedScene scene = vectorize(record);
  return reconstruct_trajectory(scene, forward(model, scene));
}

EvaluationMetrics predicted_metrics(const Trajectory& predicted,
                                    const SceneRecord& record) {
  const Trajectory* co = record.co.has_value() ? &*record.co : nullptr;
  return compute_metrics(predicted, co);
}

namespace {

ErrorReport evaluate_impl(const PredictorModel& model,
                          const std::vector<SceneRecord>& pool,
                          bool parallel) {
  if (pool.empty()) {
    throw std::invalid_argument("evaluate_pool: empty pool");
  }
  const ScenarioKind kind = pool.front().scenario.kind;
  const std::vector<std::string> metric_names = metric_output_names(kind);
  const int n = static_cast<int>(pool.size());
  std::vector<double> ades(n, 0.0);
  std::vector<std::vector<double>> metric_errors(
      metric_names.size(), std::vector<double>(n, 0.0));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    const SceneRecord& record = pool[i];
    const Trajectory predicted = predict_trajectory(model, record);
    ades[i] = ade(predicted, record.ego);
    const EvaluationMetrics derived = predicted_metrics(predicted, record);
    const std::vector<double> predicted_row =
        metric_output_row(kind, derived);
    const std::vector<double> truth_row =
        metric_output_row(kind, record.metrics);
    for (std::size_t m = 0; m < metric_names.size(); ++m) {
      metric_errors[m][i] = std::abs(predicted_row[m] - truth_row[m]);
    }
  }
  (void)parallel;

  // Fixed-order reduction, identical for the serial and parallel paths.
  ErrorReport report;
  double acc = 0.0;
  for (double a : ades) acc += a;
  report.ade = acc / n;
  for (std::size_t m = 0; m < metric_names.size(); ++m) {
    double err = 0.0;
    for (double e : metric_errors[m]) err += e;
    report.metric_mae[metric_names[m]] = err / n;
  }
  return report;
}

}  // namespace

ErrorReport evaluate_pool(const PredictorModel& model,
                          const std::vector<SceneRecord>& pool) {
  return evaluate_impl(model, pool, true);
}

ErrorReport evaluate_pool_serial(const PredictorModel& model,
                                 const std::vector<SceneRecord>& pool) {
  return evaluate_impl(model, pool, false);
}

}  // namespace svt
