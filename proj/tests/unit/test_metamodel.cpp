#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "svt/generation.hpp"
#include "svt/metamodel.hpp"
#include "svt/metrics.hpp"

using namespace svt;

namespace {

TabularDataset one_feature(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  TabularDataset dataset;
  dataset.input_names = {"x"};
  dataset.output_names = {"y"};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    dataset.inputs.push_back({xs[i]});
    dataset.outputs.push_back({ys[i]});
  }
  return dataset;
}

}  // namespace

TEST_CASE("input manifests follow the active inputs per kind") {
  CHECK(metamodel_input_names(ScenarioKind::kAcc).size() == 6);
  CHECK(metamodel_input_names(ScenarioKind::kLk).size() == 5);
  CHECK(metamodel_input_names(ScenarioKind::kAccAndLk).size() == 10);
  CHECK(metric_output_names(ScenarioKind::kAcc) ==
        std::vector<std::string>{"a_min[m/s^2]", "d_min[m]"});
  CHECK(metric_output_names(ScenarioKind::kLk) ==
        std::vector<std::string>{"p_lat_max[m]"});
  CHECK(metric_output_names(ScenarioKind::kAccAndLk).size() == 3);
}

TEST_CASE("constant targets collapse to a single constant prediction") {
  TabularDataset dataset =
      one_feature({0, 1, 2, 3, 4, 5, 6, 7}, {3, 3, 3, 3, 3, 3, 3, 3});
  const TreeEnsemble forest = fit_extra_trees(dataset, {20, 2, 0, 1});
  for (double x : {-10.0, 0.5, 3.0, 99.0}) {
    CHECK(forest.predict({x})[0] == doctest::Approx(3.0));
  }
  // Zero variance stops recursion at the root.
  for (const auto& tree : forest.trees) {
    CHECK(tree.nodes.size() == 1);
  }
}

TEST_CASE("single training row with min_samples_leaf 1") {
  TabularDataset dataset = one_feature({4.0}, {7.5});
  const TreeEnsemble forest = fit_extra_trees(dataset, {10, 1, 0, 1});
  CHECK(forest.predict({-100.0})[0] == doctest::Approx(7.5));
  CHECK(forest.predict({100.0})[0] == doctest::Approx(7.5));
}

TEST_CASE("too few rows is an error") {
  TabularDataset dataset = one_feature({1.0}, {1.0});
  CHECK_THROWS_AS(fit_extra_trees(dataset, {10, 2, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("step function: forest beats a 1-nearest-neighbor oracle") {
  // 20 training rows of a step function with its jump at x = 9.9. Probes
  // just left of the jump are closest to the x = 10 row, so the
  // brute-force 1-NN oracle predicts the wrong plateau on all of them,
  // while the ensemble's graded estimate stays strictly below 1.
  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(i < 9.9 ? 0.0 : 1.0);
  }
  const TabularDataset dataset = one_feature(xs, ys);
  const TreeEnsemble forest = fit_extra_trees(dataset, {100, 2, 0, 3});

  const std::vector<double> test_x{9.55, 9.65, 9.75, 9.85};
  const std::vector<double> test_y{0.0, 0.0, 0.0, 0.0};
  double forest_err = 0.0, nn_err = 0.0;
  for (std::size_t i = 0; i < test_x.size(); ++i) {
    forest_err += std::abs(forest.predict({test_x[i]})[0] - test_y[i]);
    double best_d = 1e300, best_y = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double d = std::abs(xs[j] - test_x[i]);
      if (d < best_d) {
        best_d = d;
        best_y = ys[j];
      }
    }
    nn_err += std::abs(best_y - test_y[i]);
  }
  CHECK(nn_err / test_x.size() == doctest::Approx(1.0));
  CHECK(forest_err / test_x.size() < nn_err / test_x.size());
}

TEST_CASE("predictions stay inside the training target range") {
  std::vector<SceneRecord> records;
  for (std::uint64_t i = 0; i < 200; ++i) {
    records.push_back(generate_record(ScenarioKind::kAcc, 250, i));
  }
  const TabularDataset dataset = make_tabular_dataset(records);
  const TreeEnsemble forest = fit_extra_trees(dataset, {30, 2, 0, 5});
  std::vector<double> lo(dataset.output_names.size(), 1e300);
  std::vector<double> hi(dataset.output_names.size(), -1e300);
  for (const auto& row : dataset.outputs) {
    for (std::size_t o = 0; o < row.size(); ++o) {
      lo[o] = std::min(lo[o], row[o]);
      hi[o] = std::max(hi[o], row[o]);
    }
  }
  for (std::uint64_t i = 200; i < 400; ++i) {
    const SceneRecord probe = generate_record(ScenarioKind::kAcc, 251, i);
    const std::vector<double> p =
        forest.predict(metamodel_input_row(probe.scenario));
    for (std::size_t o = 0; o < p.size(); ++o) {
      CHECK(p[o] >= lo[o] - 1e-12);
      CHECK(p[o] <= hi[o] + 1e-12);
    }
  }
}

TEST_CASE("duplicate trees average to the single-tree prediction") {
  TabularDataset dataset =
      one_feature({0, 1, 2, 3, 4, 5, 6, 7}, {0, 0, 1, 1, 2, 2, 3, 3});
  const TreeEnsemble one = fit_extra_trees(dataset, {1, 2, 0, 9});
  TreeEnsemble copies = one;
  copies.trees.assign(10, one.trees[0]);
  for (double x : {0.5, 2.5, 6.2}) {
    CHECK(copies.predict({x})[0] == doctest::Approx(one.predict({x})[0]));
  }
}

TEST_CASE("hand-traced walk through a fixed ensemble") {
  // x < 5 -> 1.0; else (x < 8 -> 2.0, else 4.0), plus a constant tree.
  Tree tree;
  tree.nodes.resize(5);
  tree.nodes[0] = {0, 5.0, 1, 2, {}};
  tree.nodes[1] = {-1, 0.0, -1, -1, {1.0}};
  tree.nodes[2] = {0, 8.0, 3, 4, {}};
  tree.nodes[3] = {-1, 0.0, -1, -1, {2.0}};
  tree.nodes[4] = {-1, 0.0, -1, -1, {4.0}};
  Tree constant;
  constant.nodes.push_back({-1, 0.0, -1, -1, {10.0}});

  TreeEnsemble ensemble;
  ensemble.n_features = 1;
  ensemble.n_outputs = 1;
  ensemble.trees = {tree, constant};
  CHECK(ensemble.predict({3.0})[0] == doctest::Approx((1.0 + 10.0) / 2));
  CHECK(ensemble.predict({6.0})[0] == doctest::Approx((2.0 + 10.0) / 2));
  CHECK(ensemble.predict({9.0})[0] == doctest::Approx((4.0 + 10.0) / 2));
  CHECK_THROWS_AS(ensemble.predict({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("fitting is deterministic given the seed") {
  std::vector<SceneRecord> records;
  for (std::uint64_t i = 0; i < 100; ++i) {
    records.push_back(generate_record(ScenarioKind::kLk, 260, i));
  }
  const TabularDataset dataset = make_tabular_dataset(records);
  const TreeEnsemble a = fit_extra_trees(dataset, {20, 2, 0, 77});
  const TreeEnsemble b = fit_extra_trees(dataset, {20, 2, 0, 77});
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      CHECK(a.trees[t].nodes[k].feature == b.trees[t].nodes[k].feature);
      CHECK(a.trees[t].nodes[k].threshold == b.trees[t].nodes[k].threshold);
      CHECK(a.trees[t].nodes[k].value == b.trees[t].nodes[k].value);
    }
  }
}

TEST_CASE("every leaf honors min_samples_leaf") {
  std::vector<SceneRecord> records;
  for (std::uint64_t i = 0; i < 150; ++i) {
    records.push_back(generate_record(ScenarioKind::kAcc, 261, i));
  }
  const TabularDataset dataset = make_tabular_dataset(records);
  const int min_leaf = 4;
  const TreeEnsemble forest = fit_extra_trees(dataset, {10, min_leaf, 0, 5});
  // Count rows reaching each leaf; every leaf must see >= min_leaf.
  for (const auto& tree : forest.trees) {
    std::vector<int> hits(tree.nodes.size(), 0);
    for (const auto& row : dataset.inputs) {
      int at = 0;
      while (tree.nodes[at].feature >= 0) {
        at = row[tree.nodes[at].feature] < tree.nodes[at].threshold
                 ? tree.nodes[at].left
                 : tree.nodes[at].right;
      }
      ++hits[at];
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.nodes[k].feature < 0) {
        CHECK(hits[k] >= min_leaf);
      }
    }
  }
}
