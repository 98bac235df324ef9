// Wall-time comparison of the OpenMP kernels against their serial
// reference implementations, plus a bit-equality check on each pair.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "svt/evaluation.hpp"
#include "svt/generation.hpp"
#include "svt/metamodel.hpp"
#include "svt/predictor.hpp"
#include "svt/vectorizer.hpp"

namespace {

double seconds(const std::chrono::steady_clock::time_point& from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from)
      .count();
}

void print_row(const char* name, double serial_s, double parallel_s,
               bool identical) {
  std::printf("%-24s %10.3f s %10.3f s %8.2fx   %s\n", name, serial_s,
              parallel_s, serial_s / parallel_s,
              identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-24s %12s %12s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  // Scene generation.
  const svt::GenerationJob job{svt::ScenarioKind::kAccAndLk, 77, 4000, {}};
  auto t0 = std::chrono::steady_clock::now();
  const auto serial_records = svt::generate_records_serial(job);
  const double gen_serial = seconds(t0);
  t0 = std::chrono::steady_clock::now();
  const auto parallel_records = svt::generate_records(job);
  const double gen_parallel = seconds(t0);
  bool identical = serial_records.size() == parallel_records.size();
  for (std::size_t i = 0; identical && i < serial_records.size(); ++i) {
    identical = serial_records[i].metrics.a_min ==
                    parallel_records[i].metrics.a_min &&
                serial_records[i].ego.states.back().x ==
                    parallel_records[i].ego.states.back().x;
  }
  print_row("generate_records", gen_serial, gen_parallel, identical);

  // Batch gradient.
  svt::ModelConfig config;
  const svt::PredictorModel model = svt::init_model(config);
  std::vector<svt::CompiledScene> compiled;
  std::vector<int> indices;
  for (std::size_t i = 0; i < 512; ++i) {
    compiled.push_back(svt::compile_scene(svt::vectorize(serial_records[i])));
    indices.push_back(static_cast<int>(i));
  }
  std::vector<double> grad_serial, grad_parallel;
  t0 = std::chrono::steady_clock::now();
  double loss_serial = 0.0, loss_parallel = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    loss_serial = svt::batch_loss_and_gradient(model, compiled, indices,
                                               grad_serial, false);
  }
  const double grad_serial_s = seconds(t0);
  t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < 5; ++rep) {
    loss_parallel = svt::batch_loss_and_gradient(model, compiled, indices,
                                                 grad_parallel, true);
  }
  const double grad_parallel_s = seconds(t0);
  identical = loss_serial == loss_parallel && grad_serial == grad_parallel;
  print_row("batch_gradient", grad_serial_s, grad_parallel_s, identical);

  // Forest fitting.
  std::vector<svt::SceneRecord> table_records(serial_records.begin(),
                                              serial_records.begin() + 2000);
  const svt::TabularDataset table = svt::make_tabular_dataset(table_records);
  const svt::ForestParams forest_params{100, 2, 0, 11};
  t0 = std::chrono::steady_clock::now();
  const auto forest_serial = svt::fit_extra_trees(table, forest_params, false);
  const double forest_serial_s = seconds(t0);
  t0 = std::chrono::steady_clock::now();
  const auto forest_parallel = svt::fit_extra_trees(table, forest_params, true);
  const double forest_parallel_s = seconds(t0);
  identical = true;
  for (int t = 0; identical && t < forest_params.num_trees; ++t) {
    identical = forest_serial.trees[t].nodes.size() ==
                forest_parallel.trees[t].nodes.size();
  }
  identical = identical &&
              forest_serial.predict(table.inputs[0]) ==
                  forest_parallel.predict(table.inputs[0]);
  print_row("fit_extra_trees", forest_serial_s, forest_parallel_s, identical);

  // Pool evaluation.
  const std::vector<svt::SceneRecord> pool(serial_records.begin(),
                                           serial_records.begin() + 1000);
  t0 = std::chrono::steady_clock::now();
  const auto eval_serial = svt::evaluate_pool_serial(model, pool);
  const double eval_serial_s = seconds(t0);
  t0 = std::chrono::steady_clock::now();
  const auto eval_parallel = svt::evaluate_pool(model, pool);
  const double eval_parallel_s = seconds(t0);
  identical = eval_serial.ade == eval_parallel.ade &&
              eval_serial.metric_mae == eval_parallel.metric_mae;
  print_row("evaluate_pool", eval_serial_s, eval_parallel_s, identical);

  return 0;
}
