#include "svt/metamodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "svt/rng.hpp"

namespace svt {

std::vector<std::string> metamodel_input_names(ScenarioKind kind) {
  std::vector<std::string> names;
  if (kind_has_curvature(kind)) {
    names.insert(names.end(), {"a0", "a1", "a2", "a3"});
  }
  names.push_back("v_ego");
  if (kind_has_co(kind)) {
    names.insert(names.end(), {"x_co", "v_co", "t_v_co", "a_co", "t_a_co"});
  }
  return names;
}

std::vector<std::string> metric_output_names(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAcc:
      return {"a_min[m/s^2]", "d_min[m]"};
    case ScenarioKind::kLk:
      return {"p_lat_max[m]"};
    case ScenarioKind::kAccAndLk:
      return {"a_min[m/s^2]", "d_min[m]", "p_lat_max[m]"};
  }
  throw std::logic_error("unreachable scenario kind");
}

std::vector<double> metamodel_input_row(const ConcreteScenario& scenario) {
  std::vector<double> row;
  if (kind_has_curvature(scenario.kind)) {
    row.insert(row.end(), {scenario.a0, scenario.a1, scenario.a2, scenario.a3});
  }
  row.push_back(scenario.v_ego);
  if (kind_has_co(scenario.kind)) {
    if (!scenario.co.has_value()) {
      throw std::invalid_argument("metamodel_input_row: missing Co inputs");
    }
    row.insert(row.end(), {scenario.co->x_co, scenario.co->v_co,
                           scenario.co->t_v_co, scenario.co->a_co,
                           scenario.co->t_a_co});
  }
  return row;
}

std::vector<double> metric_output_row(ScenarioKind kind,
                                      const EvaluationMetrics& metrics) {
  switch (kind) {
    case ScenarioKind::kAcc:
      return {metrics.a_min, metrics.d_min.value()};
    case ScenarioKind::kLk:
      return {metrics.p_lat_max};
    case ScenarioKind::kAccAndLk:
      return {metrics.a_min, metrics.d_min.value(), metrics.p_lat_max};
  }
  throw std::logic_error("unreachable scenario kind");
}

TabularDataset make_tabular_dataset(const std::vector<SceneRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("make_tabular_dataset: no records");
  }
  const ScenarioKind kind = records.front().scenario.kind;
  TabularDataset dataset;
  dataset.input_names = metamodel_input_names(kind);
  dataset.output_names = metric_output_names(kind);
  for (const auto& record : records) {
    if (record.scenario.kind != kind) {
      throw std::invalid_argument("make_tabular_dataset: mixed kinds");
    }
    dataset.inputs.push_back(metamodel_input_row(record.scenario));
    dataset.outputs.push_back(metric_output_row(kind, record.metrics));
  }
  return dataset;
}

namespace {

struct SplitStats {
  std::size_t count{0};
  std::vector<double> sum, sum_sq;

  explicit SplitStats(std::size_t n_outputs)
      : sum(n_outputs, 0.0), sum_sq(n_outputs, 0.0) {}

  void add(const std::vector<double>& y) {
    ++count;
    for (std::size_t o = 0; o < sum.size(); ++o) {
      sum[o] += y[o];
      sum_sq[o] += y[o] * y[o];
    }
  }

  // Per-output biased variance times the row count.
  double weighted_variance(std::size_t o) const {
    return sum_sq[o] - sum[o] * sum[o] / static_cast<double>(count);
  }

  // Summed across outputs, each normalized by its whole-dataset variance
  // so differently-scaled metrics weigh equally in the split score.
  double normalized_variance(const std::vector<double>& output_scale) const {
    double acc = 0.0;
    for (std::size_t o = 0; o < sum.size(); ++o) {
      acc += weighted_variance(o) / output_scale[o];
    }
    return acc;
  }
};

class TreeBuilder {
 public:
  TreeBuilder(const TabularDataset& dataset, const ForestParams& params,
              SplitMix64 stream)
      : dataset_(dataset), params_(params), stream_(stream) {}

  Tree build() {
    std::vector<int> rows(dataset_.inputs.size());
    std::iota(rows.begin(), rows.end(), 0);

    const std::size_t n_outputs = dataset_.output_names.size();
    SplitStats root(n_outputs);
    for (int r : rows) root.add(dataset_.outputs[r]);
    output_scale_.assign(n_outputs, 1.0);
    for (std::size_t o = 0; o < n_outputs; ++o) {
      const double v = root.weighted_variance(o) / static_cast<double>(rows.size());
      if (v > 0.0) output_scale_[o] = v;
    }

    tree_.nodes.clear();
    build_node(std::move(rows));
    return std::move(tree_);
  }

 private:
  int build_node(std::vector<int> rows) {
    const std::size_t n_outputs = dataset_.output_names.size();
    const std::size_t n_features = dataset_.input_names.size();
    const int node_index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    SplitStats stats(n_outputs);
    for (int r : rows) stats.add(dataset_.outputs[r]);

    const bool splittable =
        rows.size() >= 2 * static_cast<std::size_t>(params_.min_samples_leaf) &&
        stats.normalized_variance(output_scale_) > 0.0;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    if (splittable) {
      for (int f : candidate_features(n_features)) {
        double lo = dataset_.inputs[rows.front()][f];
        double hi = lo;
        for (int r : rows) {
          lo = std::min(lo, dataset_.inputs[r][f]);
          hi = std::max(hi, dataset_.inputs[r][f]);
        }
        if (lo == hi) continue;
        const double threshold = stream_.next_uniform(lo, hi);
        SplitStats left(n_outputs), right(n_outputs);
        for (int r : rows) {
          (dataset_.inputs[r][f] < threshold ? left : right)
              .add(dataset_.outputs[r]);
        }
        if (left.count < static_cast<std::size_t>(params_.min_samples_leaf) ||
            right.count < static_cast<std::size_t>(params_.min_samples_leaf)) {
          continue;
        }
        const double score = left.normalized_variance(output_scale_) +
                             right.normalized_variance(output_scale_);
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = threshold;
        }
      }
    }

    if (best_feature < 0) {
      TreeNode& leaf = tree_.nodes[node_index];
      leaf.value.resize(n_outputs);
      for (std::size_t o = 0; o < n_outputs; ++o) {
        leaf.value[o] = stats.sum[o] / static_cast<double>(stats.count);
      }
      return node_index;
    }

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      (dataset_.inputs[r][best_feature] < best_threshold ? left_rows
                                                         : right_rows)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = build_node(std::move(left_rows));
    const int right = build_node(std::move(right_rows));
    TreeNode& node = tree_.nodes[node_index];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return node_index;
  }

  std::vector<int> candidate_features(std::size_t n_features) {
    std::vector<int> all(n_features);
    std::iota(all.begin(), all.end(), 0);
    if (params_.features_per_split <= 0 ||
        params_.features_per_split >= static_cast<int>(n_features)) {
      return all;
    }
    // Partial Fisher-Yates; candidates stay in draw order.
    std::vector<int> picked;
    for (int i = 0; i < params_.features_per_split; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(stream_.next_below(n_features - i));
      std::swap(all[i], all[j]);
      picked.push_back(all[i]);
    }
    return picked;
  }

  const TabularDataset& dataset_;
  const ForestParams& params_;
  SplitMix64 stream_;
  Tree tree_;
  std::vector<double> output_scale_;
};

}  // namespace

std::vector<double> TreeEnsemble::predict(
    const std::vector<double>& input) const {
  if (input.size() != n_features) {
    throw std::invalid_argument("TreeEnsemble::predict: feature count " +
                                std::to_string(input.size()) + " != " +
                                std::to_string(n_features));
  }
  std::vector<double> acc(n_outputs, 0.0);
  for (const Tree& tree : trees) {
    int at = 0;
    while (tree.nodes[at].feature >= 0) {
      const TreeNode& node = tree.nodes[at];
      at = input[node.feature] < node.threshold ? node.left : node.right;
    }
    for (std::size_t o = 0; o < n_outputs; ++o) {
      acc[o] += tree.nodes[at].value[o];
    }
  }
  for (double& v : acc) v /= static_cast<double>(trees.size());
  return acc;
}

TreeEnsemble fit_extra_trees(const TabularDataset& dataset,
                             const ForestParams& params, bool parallel) {
  if (dataset.inputs.size() != dataset.outputs.size()) {
    throw std::invalid_argument("fit_extra_trees: row count mismatch");
  }
  if (params.num_trees < 1 || params.min_samples_leaf < 1) {
    throw std::invalid_argument("fit_extra_trees: bad parameters");
  }
  // Every leaf must hold >= min_samples_leaf rows, so at least that many
  // rows are needed for the root itself to be a valid leaf.
  if (dataset.inputs.size() <
      static_cast<std::size_t>(params.min_samples_leaf)) {
    throw std::invalid_argument("fit_extra_trees: too few rows");
  }
  TreeEnsemble ensemble;
  ensemble.params = params;
  ensemble.n_features = dataset.input_names.size();
  ensemble.n_outputs = dataset.output_names.size();
  ensemble.trees.resize(params.num_trees);

  // One substream per tree, so the forest is identical however the loop
  // is scheduled.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int t = 0; t < params.num_trees; ++t) {
    TreeBuilder builder(dataset, params,
                        substream(params.seed, StreamPurpose::kForest,
                                  static_cast<std::uint64_t>(t)));
    ensemble.trees[t] = builder.build();
  }
  (void)parallel;
  return ensemble;
}

}  // namespace svt
