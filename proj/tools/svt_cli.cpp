#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svt/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDataError = 2;
constexpr int kExitCheckFailure = 3;

void print_baseline_table(const std::vector<svt::BaselineRow>& rows) {
  std::cout << "| Scenario | Evaluation metric | MAE extra-trees | MAE "
               "predictor |\n|---|---|---|---|\n";
  for (const auto& row : rows) {
    std::cout << "| " << svt::to_string(row.kind) << " | " << row.metric
              << " | " << row.mae_extra_trees << " | " << row.mae_predictor
              << " |\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svt: scenario generation, vectorization, trajectory "
               "prediction, and metamodel comparison"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config file")
      ->check(CLI::ExistingFile);
  std::string out_dir;
  auto* out_opt =
      app.add_option("--out", out_dir, "output directory (overrides config)");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option(
      "--seed", seed, "model init / forest seed (overrides config)");
  std::size_t test_size = 0;
  auto* test_size_opt = app.add_option(
      "--test-size", test_size, "test pool size per kind (overrides config)");

  auto* generate =
      app.add_subcommand("generate", "sample, simulate, and write datasets");

  auto* train = app.add_subcommand(
      "train", "train the predictor on one scenario mix and evaluate it");
  int mix_index = 1;
  train->add_option("--mix", mix_index, "1-based mix row index")->required();

  auto* baseline = app.add_subcommand(
      "baseline", "extra-trees metamodel vs predictor metric MAEs");
  std::string checkpoint;
  baseline->add_option("--checkpoint", checkpoint,
                       "trained predictor checkpoint to reuse (otherwise a "
                       "model is trained per scenario kind)");

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "finite-difference verification of the backward pass");

  auto* report =
      app.add_subcommand("report", "consolidate row files into Markdown");
  std::vector<std::string> row_paths;
  report->add_option("rows", row_paths, "row_mix*.csv files");
  std::string baseline_csv;
  report->add_option("--baseline", baseline_csv, "baseline.csv file");
  std::string report_out;
  report->add_option("-o,--output", report_out,
                     "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    svt::ExperimentConfig config = config_path.empty()
                                       ? svt::default_config()
                                       : svt::load_config(config_path);
    if (out_opt->count() > 0) config.out_dir = out_dir;
    if (test_size_opt->count() > 0) config.test_pool_size = test_size;
    if (seed_opt->count() > 0) {
      config.model.init_seed = seed;
      config.baseline.forest.seed = seed;
    }

    if (generate->parsed()) {
      svt::cmd_generate(config);
    } else if (train->parsed()) {
      svt::cmd_train(config, mix_index);
    } else if (baseline->parsed()) {
      std::optional<std::string> ckpt;
      if (!checkpoint.empty()) ckpt = checkpoint;
      print_baseline_table(svt::cmd_baseline(config, ckpt));
    } else if (gradcheck->parsed()) {
      const double err = svt::cmd_gradcheck(config);
      std::cout << "gradcheck: max relative error " << err << " (threshold "
                << svt::kGradCheckThreshold << ")\n";
      if (!(err <= svt::kGradCheckThreshold)) {
        std::cout << "gradcheck: FAIL\n";
        return kExitCheckFailure;
      }
      std::cout << "gradcheck: PASS\n";
    } else if (report->parsed()) {
      std::optional<std::string> baseline_opt;
      if (!baseline_csv.empty()) baseline_opt = baseline_csv;
      const std::string markdown = svt::cmd_report(row_paths, baseline_opt);
      if (report_out.empty()) {
        std::cout << markdown;
      } else {
        std::ofstream out(report_out);
        if (!out) {
          throw std::runtime_error("report: cannot write " + report_out);
        }
        out << markdown;
        std::cout << "report: wrote " << report_out << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return 0;
}
