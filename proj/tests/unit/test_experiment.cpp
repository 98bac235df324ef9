#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "svt/experiment.hpp"

using namespace svt;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig tiny_config(const fs::path& dir) {
  ExperimentConfig config = default_config();
  config.generation.counts = {{ScenarioKind::kAcc, 30},
                              {ScenarioKind::kLk, 30},
                              {ScenarioKind::kAccAndLk, 30}};
  config.test_pool_size = 8;
  config.model.epochs = 2;
  config.model.hidden_dim = 8;
  config.baseline.train_rows = 20;
  config.baseline.forest.num_trees = 10;
  config.mixes = {{20, 0, 0}, {4, 4, 4}};
  config.data_dir = (dir / "data").string();
  config.out_dir = (dir / "out").string();
  config.plots_per_kind = 1;
  return config;
}

}  // namespace

TEST_CASE("default config carries the ten standard mixes") {
  const ExperimentConfig config = default_config();
  REQUIRE(config.mixes.size() == 10);
  CHECK(config.mixes[0].n_acc == 2000);
  CHECK(config.mixes[5].n_lk == 3000);
  CHECK(config.mixes[8].n_acc_lk == 200);
  CHECK(config.mixes[9].total() == 200);
}

TEST_CASE("config parsing applies overrides and rejects unknown keys") {
  const ExperimentConfig config = parse_config(R"({
    "generation": {"counts": {"acc": 5}},
    "sim": {"acc_gain": 0.4},
    "model": {"hidden_dim": 16, "precision": "single"},
    "mixes": [[1, 2, 3]],
    "baseline": {"num_trees": 7},
    "test_pool_size": 50
  })");
  CHECK(config.generation.counts.at(ScenarioKind::kAcc) == 5);
  CHECK(config.generation.counts.at(ScenarioKind::kLk) == 3000);
  CHECK(config.sim.acc_gain == 0.4);
  CHECK(config.model.hidden_dim == 16);
  CHECK(config.model.precision == Precision::kSingle);
  CHECK(config.mixes.size() == 1);
  CHECK(config.mixes[0].n_acc_lk == 3);
  CHECK(config.baseline.forest.num_trees == 7);
  CHECK(config.test_pool_size == 50);

  CHECK_THROWS_WITH_AS(parse_config(R"({"modell": {}})"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"hidden": 4}})"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"sim": {"dt": "fast"}})"),
                       doctest::Contains(""), std::exception);
  CHECK_THROWS_AS(parse_config("not json"), std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"model": {"hidden_dim": 3}})"),
                  std::invalid_argument);
}

TEST_CASE("generate writes deterministic files and skips zero counts") {
  const fs::path dir = fs::temp_directory_path() / "svt_exp_gen";
  fs::remove_all(dir);
  ExperimentConfig config = tiny_config(dir);
  config.generation.counts[ScenarioKind::kLk] = 0;

  const auto written = cmd_generate(config);
  CHECK(written.at(ScenarioKind::kAcc) == 30);
  CHECK(written.count(ScenarioKind::kLk) == 0);
  CHECK(fs::exists(dataset_path(config, ScenarioKind::kAcc)));
  CHECK(!fs::exists(dataset_path(config, ScenarioKind::kLk)));

  const std::string first = read_file(dataset_path(config, ScenarioKind::kAcc));
  cmd_generate(config);
  CHECK(read_file(dataset_path(config, ScenarioKind::kAcc)) == first);
  fs::remove_all(dir);
}

TEST_CASE("train writes a row file, checkpoint, and plots; report reads them") {
  const fs::path dir = fs::temp_directory_path() / "svt_exp_train";
  fs::remove_all(dir);
  ExperimentConfig config = tiny_config(dir);
  cmd_generate(config);

  const MixReportRow row = cmd_train(config, 2);
  CHECK(row.mix.n_acc == 4);
  CHECK(row.ade.at(ScenarioKind::kAcc) > 0.0);
  CHECK(row.metric_mae.at(ScenarioKind::kLk).count("p_lat_max[m]") == 1);

  const std::string row_path = mix_row_path(config, 2);
  CHECK(fs::exists(row_path));
  CHECK(fs::exists(fs::path(config.out_dir) / "model_mix2.json"));
  CHECK(fs::exists(fs::path(config.out_dir) / "plot_mix2_acc_0.svg"));

  const MixReportRow loaded = read_mix_row(row_path);
  CHECK(loaded.mix_index == 2);
  CHECK(loaded.ade.at(ScenarioKind::kLk) ==
        doctest::Approx(row.ade.at(ScenarioKind::kLk)));
  CHECK(loaded.metric_mae.at(ScenarioKind::kAccAndLk).size() == 3);

  const std::string markdown = cmd_report({row_path}, std::nullopt);
  CHECK(markdown.find("| Row |") != std::string::npos);
  CHECK(markdown.find("ADE_ACC") != std::string::npos);

  CHECK_THROWS_AS(cmd_train(config, 0), std::runtime_error);
  CHECK_THROWS_AS(cmd_train(config, 3), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("baseline emits side-by-side rows per scenario metric") {
  const fs::path dir = fs::temp_directory_path() / "svt_exp_baseline";
  fs::remove_all(dir);
  ExperimentConfig config = tiny_config(dir);
  cmd_generate(config);
  cmd_train(config, 2);

  const auto rows = cmd_baseline(
      config, (fs::path(config.out_dir) / "model_mix2.json").string());
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].kind == ScenarioKind::kAcc);
  CHECK(rows[0].metric == "a_min[m/s^2]");
  CHECK(rows[1].metric == "d_min[m]");
  CHECK(rows[2].kind == ScenarioKind::kLk);
  CHECK(rows[2].metric == "p_lat_max[m]");
  for (const auto& row : rows) {
    CHECK(row.mae_extra_trees >= 0.0);
    CHECK(row.mae_predictor >= 0.0);
  }

  const std::string baseline_csv =
      (fs::path(config.out_dir) / "baseline.csv").string();
  CHECK(fs::exists(baseline_csv));
  const auto reread = read_baseline_rows(baseline_csv);
  CHECK(reread.size() == 6);
  CHECK(reread[5].mae_extra_trees ==
        doctest::Approx(rows[5].mae_extra_trees));

  const std::string markdown = cmd_report({}, baseline_csv);
  CHECK(markdown.find("MAE extra-trees") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("gradcheck passes in double and refuses single precision") {
  ExperimentConfig config = default_config();
  CHECK(cmd_gradcheck(config) <= kGradCheckThreshold);
  config.model.precision = Precision::kSingle;
  CHECK_THROWS_AS(cmd_gradcheck(config), std::invalid_argument);
}

TEST_CASE("report rejects empty input") {
  CHECK_THROWS_AS(cmd_report({}, std::nullopt), std::runtime_error);
}

TEST_CASE("report annotates duplicate mix labels") {
  const fs::path dir = fs::temp_directory_path() / "svt_exp_dup";
  fs::remove_all(dir);
  fs::create_directories(dir);
  MixReportRow row;
  row.mix_index = 1;
  row.mix = {10, 0, 0};
  for (ScenarioKind kind :
       {ScenarioKind::kAcc, ScenarioKind::kLk, ScenarioKind::kAccAndLk}) {
    row.ade[kind] = 1.0;
    row.metric_mae[kind] = {};
  }
  const std::string first = (dir / "row_a.csv").string();
  const std::string second = (dir / "row_b.csv").string();
  write_mix_row(row, first);
  row.mix_index = 2;
  write_mix_row(row, second);
  const std::string markdown = cmd_report({first, second}, std::nullopt);
  CHECK(markdown.find("(duplicate mix)") != std::string::npos);
  fs::remove_all(dir);
}
