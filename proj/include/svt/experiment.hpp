#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svt/dataset_io.hpp"
#include "svt/metamodel.hpp"
#include "svt/predictor.hpp"
#include "svt/simulator.hpp"

namespace svt {

struct GenerationConfig {
  std::map<ScenarioKind, std::size_t> counts{
      {ScenarioKind::kAcc, 3000},
      {ScenarioKind::kLk, 3000},
      {ScenarioKind::kAccAndLk, 3000}};
  std::map<ScenarioKind, std::uint64_t> master_seeds{
      {ScenarioKind::kAcc, 1001},
      {ScenarioKind::kLk, 2002},
      {ScenarioKind::kAccAndLk, 3003}};
};

struct BaselineConfig {
  ForestParams forest{100, 2, 0, 42};
  std::size_t train_rows{2000};
};

struct ExperimentConfig {
  GenerationConfig generation;
  SimParams sim;
  ModelConfig model;
  std::vector<MixSpec> mixes;  // defaults to the ten standard rows
  BaselineConfig baseline;
  std::size_t test_pool_size{kDefaultTestPoolSize};
  std::size_t plots_per_kind{1};
  std::string data_dir{"data"};
  std::string out_dir{"out"};
};

// The ten standard scenario mixes.
std::vector<MixSpec> default_mixes();

ExperimentConfig default_config();

// Strict parse: unknown keys anywhere are an error.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Dataset path for one kind under the config's data directory.
std::string dataset_path(const ExperimentConfig& config, ScenarioKind kind);

// generate: sample + simulate + annotate metrics, one JSONL per kind.
// Prints per-kind counts and wall time. Returns records written per kind.
std::map<ScenarioKind, std::size_t> cmd_generate(
    const ExperimentConfig& config);

// Per-mix training result row, mirroring the ADE table plus derived
// metric MAE columns.
struct MixReportRow {
  int mix_index{0};
  MixSpec mix;
  std::map<ScenarioKind, double> ade;
  std::map<ScenarioKind, std::map<std::string, double>> metric_mae;
  int best_epoch{0};
  std::uint64_t init_seed{0};
};

// train: assemble the mix, train, evaluate on all three test pools, write
// row_mix<k>.csv + checkpoint + overlay SVGs under out_dir. The row file
// is deterministic; wall time goes to a sidecar meta file.
MixReportRow cmd_train(const ExperimentConfig& config, int mix_index);

struct BaselineRow {
  ScenarioKind kind{ScenarioKind::kAcc};
  std::string metric;
  double mae_extra_trees{0.0};
  double mae_predictor{0.0};
};

// baseline: per kind, extra-trees on the scenario inputs vs the motion
// predictor's derived metrics, MAE side by side. `checkpoint` reuses one
// trained model for the predictor column; otherwise a model is trained
// per kind on the same records the forest sees.
std::vector<BaselineRow> cmd_baseline(
    const ExperimentConfig& config,
    const std::optional<std::string>& checkpoint);

// gradcheck: finite-difference verification on a small double-precision
// model. Returns the max relative error; callers fail when it exceeds
// the threshold.
double cmd_gradcheck(const ExperimentConfig& config);
inline constexpr double kGradCheckThreshold = 1e-4;

// report: consolidate row/baseline files into Markdown tables.
std::string cmd_report(const std::vector<std::string>& row_paths,
                       const std::optional<std::string>& baseline_path);

// Row-file helpers shared by the CLI and the report command.
std::string mix_row_path(const ExperimentConfig& config, int mix_index);
void write_mix_row(const MixReportRow& row, const std::string& path);
MixReportRow read_mix_row(const std::string& path);
void write_baseline_rows(const std::vector<BaselineRow>& rows,
                         const std::string& path);
std::vector<BaselineRow> read_baseline_rows(const std::string& path);

}  // namespace svt
