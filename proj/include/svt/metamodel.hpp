#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svt/scenario.hpp"

namespace svt {

// Per-scenario regression table: active logical-scenario inputs against
// the scenario's evaluation metrics.
struct TabularDataset {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<std::vector<double>> inputs;   // N_S x N_I
  std::vector<std::vector<double>> outputs;  // N_S x N_O
};

// Active inputs per kind (ACC 6, LK 5, ACC&LK 10) and the metrics
// reported for that kind.
std::vector<std::string> metamodel_input_names(ScenarioKind kind);
std::vector<std::string> metric_output_names(ScenarioKind kind);

std::vector<double> metamodel_input_row(const ConcreteScenario& scenario);
std::vector<double> metric_output_row(ScenarioKind kind,
                                      const EvaluationMetrics& metrics);

// All records must share one kind.
TabularDataset make_tabular_dataset(const std::vector<SceneRecord>& records);

struct ForestParams {
  int num_trees{100};
  int min_samples_leaf{2};
  int features_per_split{0};  // 0 = consider every feature
  std::uint64_t seed{0};
};

struct TreeNode {
  int feature{-1};  // -1 marks a leaf
  double threshold{0.0};
  int left{-1};
  int right{-1};
  std::vector<double> value;  // leaf mean per output
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct TreeEnsemble {
  ForestParams params;
  std::size_t n_features{0};
  std::size_t n_outputs{0};
  std::vector<Tree> trees;

  std::vector<double> predict(const std::vector<double>& input) const;
};

// Extremely-randomized trees: every tree sees the full dataset; each
// considered feature draws one uniform threshold between its observed
// extremes and the split with the lowest row-weighted target variance
// wins. Deterministic given the seed, independent of thread count.
TreeEnsemble fit_extra_trees(const TabularDataset& dataset,
                             const ForestParams& params, bool parallel = true);

}  // namespace svt
