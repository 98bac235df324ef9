#include <doctest.h>

#include "svt/evaluation.hpp"
#include "svt/generation.hpp"
#include "svt/metamodel.hpp"
#include "svt/predictor.hpp"
#include "svt/vectorizer.hpp"

using namespace svt;

TEST_CASE("parallel generation equals the serial reference bit for bit") {
  const GenerationJob job{ScenarioKind::kAccAndLk, 808, 200, {}};
  const auto serial = generate_records_serial(job);
  const auto parallel = generate_records(job);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].scenario.seed == parallel[i].scenario.seed);
    CHECK(serial[i].lanes.center_y == parallel[i].lanes.center_y);
    for (std::size_t k = 0; k < serial[i].ego.size(); ++k) {
      CHECK(serial[i].ego[k].x == parallel[i].ego[k].x);
      CHECK(serial[i].ego[k].y == parallel[i].ego[k].y);
      CHECK(serial[i].ego[k].heading == parallel[i].ego[k].heading);
      CHECK(serial[i].ego[k].speed == parallel[i].ego[k].speed);
    }
    CHECK(serial[i].metrics.a_min == parallel[i].metrics.a_min);
    CHECK(serial[i].metrics.d_min == parallel[i].metrics.d_min);
  }
}

TEST_CASE("parallel batch gradients equal the serial reference bit for bit") {
  const PredictorModel model = init_model(ModelConfig{});
  std::vector<CompiledScene> scenes;
  std::vector<int> indices;
  const auto records =
      generate_records({ScenarioKind::kAccAndLk, 809, 64, {}});
  for (std::size_t i = 0; i < records.size(); ++i) {
    scenes.push_back(compile_scene(vectorize(records[i])));
    indices.push_back(static_cast<int>(i));
  }
  std::vector<double> grad_serial, grad_parallel;
  const double loss_serial =
      batch_loss_and_gradient(model, scenes, indices, grad_serial, false);
  const double loss_parallel =
      batch_loss_and_gradient(model, scenes, indices, grad_parallel, true);
  CHECK(loss_serial == loss_parallel);
  CHECK(grad_serial == grad_parallel);

  CHECK(dataset_loss(model, scenes, false) == dataset_loss(model, scenes, true));
}

TEST_CASE("parallel forest fitting equals the serial reference") {
  const auto records = generate_records({ScenarioKind::kAcc, 810, 300, {}});
  const TabularDataset dataset = make_tabular_dataset(records);
  const ForestParams params{40, 2, 0, 4242};
  const TreeEnsemble serial = fit_extra_trees(dataset, params, false);
  const TreeEnsemble parallel = fit_extra_trees(dataset, params, true);
  REQUIRE(serial.trees.size() == parallel.trees.size());
  for (std::size_t t = 0; t < serial.trees.size(); ++t) {
    REQUIRE(serial.trees[t].nodes.size() == parallel.trees[t].nodes.size());
    for (std::size_t k = 0; k < serial.trees[t].nodes.size(); ++k) {
      CHECK(serial.trees[t].nodes[k].feature ==
            parallel.trees[t].nodes[k].feature);
      CHECK(serial.trees[t].nodes[k].threshold ==
            parallel.trees[t].nodes[k].threshold);
      CHECK(serial.trees[t].nodes[k].value ==
            parallel.trees[t].nodes[k].value);
    }
  }
}

TEST_CASE("parallel pool evaluation equals the serial reference") {
  const PredictorModel model = init_model(ModelConfig{});
  const auto pool = generate_records({ScenarioKind::kAccAndLk, 811, 100, {}});
  const ErrorReport serial = evaluate_pool_serial(model, pool);
  const ErrorReport parallel = evaluate_pool(model, pool);
  CHECK(serial.ade == parallel.ade);
  CHECK(serial.metric_mae == parallel.metric_mae);
}
