#include "svt/experiment.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "svt/evaluation.hpp"
#include "svt/generation.hpp"
#include "svt/svg_plot.hpp"

namespace svt {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<MixSpec> default_mixes() {
  return {{2000, 0, 0},    {0, 2000, 0},    {0, 0, 2000},  {2000, 2000, 0},
          {0, 2000, 2000}, {0, 3000, 3000}, {2000, 0, 2000},
          {2000, 2000, 2000}, {2000, 2000, 200}, {0, 0, 200}};
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.mixes = default_mixes();
  return config;
}

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) {
    throw std::runtime_error("config: " + where + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end()) {
      throw std::runtime_error("config: unknown key \"" + key + "\" in " +
                               where);
    }
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

const std::map<std::string, ScenarioKind> kKindKeys{
    {"acc", ScenarioKind::kAcc},
    {"lk", ScenarioKind::kLk},
    {"acc_and_lk", ScenarioKind::kAccAndLk}};

void parse_generation(const json& obj, GenerationConfig& generation) {
  require_keys(obj, {"counts", "master_seeds"}, "generation");
  if (obj.contains("counts")) {
    require_keys(obj.at("counts"), {"acc", "lk", "acc_and_lk"},
                 "generation.counts");
    for (const auto& [key, kind] : kKindKeys) {
      if (obj.at("counts").contains(key)) {
        generation.counts[kind] = obj.at("counts").at(key).get<std::size_t>();
      }
    }
  }
  if (obj.contains("master_seeds")) {
    require_keys(obj.at("master_seeds"), {"acc", "lk", "acc_and_lk"},
                 "generation.master_seeds");
    for (const auto& [key, kind] : kKindKeys) {
      if (obj.at("master_seeds").contains(key)) {
        generation.master_seeds[kind] =
            obj.at("master_seeds").at(key).get<std::uint64_t>();
      }
    }
  }
}

void parse_sim(const json& obj, SimParams& sim) {
  require_keys(obj,
               {"dt", "horizon", "acc_gain", "time_gap", "accel_min",
                "accel_max", "wheelbase", "lookahead_min", "lookahead_factor",
                "ego_x0", "orientation_noise_bound", "co_speed_noise_bound"},
               "sim");
  read_if(obj, "dt", sim.dt);
  read_if(obj, "horizon", sim.horizon);
  read_if(obj, "acc_gain", sim.acc_gain);
  read_if(obj, "time_gap", sim.time_gap);
  read_if(obj, "accel_min", sim.accel_min);
  read_if(obj, "accel_max", sim.accel_max);
  read_if(obj, "wheelbase", sim.wheelbase);
  read_if(obj, "lookahead_min", sim.lookahead_min);
  read_if(obj, "lookahead_factor", sim.lookahead_factor);
  read_if(obj, "ego_x0", sim.ego_x0);
  read_if(obj, "orientation_noise_bound", sim.orientation_noise_bound);
  read_if(obj, "co_speed_noise_bound", sim.co_speed_noise_bound);
}

void parse_model(const json& obj, ModelConfig& model) {
  require_keys(obj,
               {"hidden_dim", "subgraph_layers", "attention_heads",
                "learning_rate", "batch_size", "epochs", "init_seed",
                "precision"},
               "model");
  read_if(obj, "hidden_dim", model.hidden_dim);
  read_if(obj, "subgraph_layers", model.subgraph_layers);
  read_if(obj, "attention_heads", model.attention_heads);
  read_if(obj, "learning_rate", model.learning_rate);
  read_if(obj, "batch_size", model.batch_size);
  read_if(obj, "epochs", model.epochs);
  read_if(obj, "init_seed", model.init_seed);
  if (obj.contains("precision")) {
    model.precision =
        precision_from_string(obj.at("precision").get<std::string>());
  }
}

void parse_baseline(const json& obj, BaselineConfig& baseline) {
  require_keys(obj,
               {"num_trees", "min_samples_leaf", "features_per_split", "seed",
                "train_rows"},
               "baseline");
  read_if(obj, "num_trees", baseline.forest.num_trees);
  read_if(obj, "min_samples_leaf", baseline.forest.min_samples_leaf);
  read_if(obj, "features_per_split", baseline.forest.features_per_split);
  read_if(obj, "seed", baseline.forest.seed);
  read_if(obj, "train_rows", baseline.train_rows);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: malformed JSON: ") +
                             e.what());
  }
  require_keys(doc,
               {"generation", "sim", "model", "mixes", "baseline",
                "test_pool_size", "plots_per_kind", "data_dir", "out_dir"},
               "top level");
  ExperimentConfig config = default_config();
  if (doc.contains("generation")) {
    parse_generation(doc.at("generation"), config.generation);
  }
  if (doc.contains("sim")) parse_sim(doc.at("sim"), config.sim);
  if (doc.contains("model")) parse_model(doc.at("model"), config.model);
  if (doc.contains("mixes")) {
    config.mixes.clear();
    for (const auto& row : doc.at("mixes")) {
      if (!row.is_array() || row.size() != 3) {
        throw std::runtime_error(
            "config: each mix must be [n_acc, n_lk, n_acc_lk]");
      }
      config.mixes.push_back({row[0].get<std::size_t>(),
                              row[1].get<std::size_t>(),
                              row[2].get<std::size_t>()});
    }
  }
  if (doc.contains("baseline")) {
    parse_baseline(doc.at("baseline"), config.baseline);
  }
  read_if(doc, "test_pool_size", config.test_pool_size);
  read_if(doc, "plots_per_kind", config.plots_per_kind);
  read_if(doc, "data_dir", config.data_dir);
  read_if(doc, "out_dir", config.out_dir);
  config.model.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dataset_path(const ExperimentConfig& config, ScenarioKind kind) {
  std::string name = to_string(kind);
  for (char& c : name) c = static_cast<char>(std::tolower(c));
  return (fs::path(config.data_dir) / (name + ".jsonl")).string();
}

std::map<ScenarioKind, std::size_t> cmd_generate(
    const ExperimentConfig& config) {
  fs::create_directories(config.data_dir);
  std::map<ScenarioKind, std::size_t> written;
  for (const auto& [kind, count] : config.generation.counts) {
    if (count == 0) {
      std::cout << "generate: " << to_string(kind)
                << ": count 0, skipping (no file written)\n";
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    GenerationJob job{kind, config.generation.master_seeds.at(kind), count,
                      config.sim};
    const std::vector<SceneRecord> records = generate_records(job);
    const std::string path = dataset_path(config, kind);
    written[kind] = write_scenes(records, path);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    std::cout << "generate: " << to_string(kind) << ": " << count
              << " records -> " << path << " (" << std::fixed
              << std::setprecision(2) << elapsed.count() << " s)\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return written;
}

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::map<ScenarioKind, std::vector<SceneRecord>> load_sources(
    const ExperimentConfig& config) {
  std::map<ScenarioKind, std::vector<SceneRecord>> sources;
  for (const auto& [key, kind] : kKindKeys) {
    (void)key;
    const std::string path = dataset_path(config, kind);
    if (!fs::exists(path)) {
      throw std::runtime_error("missing dataset " + path +
                               " (run `generate` first)");
    }
    sources[kind] = read_scenes(path);
  }
  return sources;
}

const std::vector<ScenarioKind> kAllKinds{
    ScenarioKind::kAcc, ScenarioKind::kLk, ScenarioKind::kAccAndLk};

std::string mae_column_prefix(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAcc:
      return "mae_acc.";
    case ScenarioKind::kLk:
      return "mae_lk.";
    case ScenarioKind::kAccAndLk:
      return "mae_acc_and_lk.";
  }
  throw std::logic_error("unreachable scenario kind");
}

}  // namespace

std::string mix_row_path(const ExperimentConfig& config, int mix_index) {
  return (fs::path(config.out_dir) /
          ("row_mix" + std::to_string(mix_index) + ".csv"))
      .string();
}

void write_mix_row(const MixReportRow& row, const std::string& path) {
  std::ostringstream header, values;
  header << "mix_index,n_acc,n_lk,n_acc_lk";
  values << row.mix_index << ',' << row.mix.n_acc << ',' << row.mix.n_lk << ','
         << row.mix.n_acc_lk;
  for (ScenarioKind kind : kAllKinds) {
    std::string name = to_string(kind);
    for (char& c : name) c = static_cast<char>(std::tolower(c));
    header << ",ade_" << name << "[m]";
    values << ',' << format_value(row.ade.at(kind));
  }
  for (ScenarioKind kind : kAllKinds) {
    for (const auto& [metric, value] : row.metric_mae.at(kind)) {
      header << ',' << mae_column_prefix(kind) << metric;
      values << ',' << format_value(value);
    }
  }
  header << ",best_epoch,init_seed";
  values << ',' << row.best_epoch << ',' << row.init_seed;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_mix_row: cannot write " + path);
  }
  out << header.str() << '\n' << values.str() << '\n';
}

MixReportRow read_mix_row(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_mix_row: cannot open " + path);
  }
  std::string header_line, value_line;
  if (!std::getline(in, header_line) || !std::getline(in, value_line)) {
    throw std::runtime_error("read_mix_row: " + path + " is truncated");
  }
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    return cells;
  };
  const std::vector<std::string> names = split(header_line);
  const std::vector<std::string> cells = split(value_line);
  if (names.size() != cells.size()) {
    throw std::runtime_error("read_mix_row: " + path + " malformed");
  }
  MixReportRow row;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& name = names[i];
    const std::string& cell = cells[i];
    if (name == "mix_index") {
      row.mix_index = std::stoi(cell);
    } else if (name == "n_acc") {
      row.mix.n_acc = std::stoull(cell);
    } else if (name == "n_lk") {
      row.mix.n_lk = std::stoull(cell);
    } else if (name == "n_acc_lk") {
      row.mix.n_acc_lk = std::stoull(cell);
    } else if (name == "ade_acc[m]") {
      row.ade[ScenarioKind::kAcc] = std::stod(cell);
    } else if (name == "ade_lk[m]") {
      row.ade[ScenarioKind::kLk] = std::stod(cell);
    } else if (name == "ade_acc_and_lk[m]") {
      row.ade[ScenarioKind::kAccAndLk] = std::stod(cell);
    } else if (name == "best_epoch") {
      row.best_epoch = std::stoi(cell);
    } else if (name == "init_seed") {
      row.init_seed = std::stoull(cell);
    } else {
      bool matched = false;
      for (ScenarioKind kind : kAllKinds) {
        const std::string prefix = mae_column_prefix(kind);
        if (name.rfind(prefix, 0) == 0) {
          row.metric_mae[kind][name.substr(prefix.size())] = std::stod(cell);
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw std::runtime_error("read_mix_row: unknown column " + name);
      }
    }
  }
  return row;
}

MixReportRow cmd_train(const ExperimentConfig& config, int mix_index) {
  if (mix_index < 1 || mix_index > static_cast<int>(config.mixes.size())) {
    throw std::runtime_error("train: mix index " + std::to_string(mix_index) +
                             " out of range 1.." +
                             std::to_string(config.mixes.size()));
  }
  const MixSpec mix = config.mixes[mix_index - 1];
  const auto start = std::chrono::steady_clock::now();

  const auto sources = load_sources(config);
  const ScenePools pools = assemble_mix(mix, sources, config.test_pool_size);

  std::vector<VectorizedScene> training;
  training.reserve(pools.training.size());
  for (const auto& record : pools.training) {
    training.push_back(vectorize(record));
  }
  const TrainResult trained = train(training, config.model);

  MixReportRow row;
  row.mix_index = mix_index;
  row.mix = mix;
  row.best_epoch = trained.best_epoch;
  row.init_seed = config.model.init_seed;
  for (ScenarioKind kind : kAllKinds) {
    const ErrorReport report =
        evaluate_pool(trained.model, pools.test.at(kind));
    row.ade[kind] = report.ade;
    row.metric_mae[kind] = report.metric_mae;
  }

  fs::create_directories(config.out_dir);
  const std::string row_path = mix_row_path(config, mix_index);
  write_mix_row(row, row_path);
  save_checkpoint(trained.model,
                  (fs::path(config.out_dir) /
                   ("model_mix" + std::to_string(mix_index) + ".json"))
                      .string());

  for (ScenarioKind kind : kAllKinds) {
    const auto& pool = pools.test.at(kind);
    for (std::size_t i = 0; i < std::min(config.plots_per_kind, pool.size());
         ++i) {
      const Trajectory predicted = predict_trajectory(trained.model, pool[i]);
      std::string name = to_string(kind);
      for (char& c : name) c = static_cast<char>(std::tolower(c));
      write_scene_svg(pool[i], &predicted,
                      (fs::path(config.out_dir) /
                       ("plot_mix" + std::to_string(mix_index) + "_" + name +
                        "_" + std::to_string(i) + ".svg"))
                          .string());
    }
  }

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  json meta{{"wall_seconds", elapsed.count()},
            {"training_pool", pools.training.size()},
            {"mix_label", mix.label()},
            {"epochs", config.model.epochs},
            {"precision", to_string(config.model.precision)}};
  std::ofstream meta_out(row_path + ".meta.json");
  meta_out << meta.dump(2) << '\n';

  std::cout << "train: mix " << mix_index << " (" << mix.label() << "): ";
  for (ScenarioKind kind : kAllKinds) {
    std::cout << "ADE_" << to_string(kind) << "=" << row.ade.at(kind) << "m ";
  }
  std::cout << "(" << elapsed.count() << " s)\n";
  return row;
}

std::vector<BaselineRow> cmd_baseline(
    const ExperimentConfig& config,
    const std::optional<std::string>& checkpoint) {
  const auto sources = load_sources(config);
  std::optional<PredictorModel> shared_model;
  if (checkpoint.has_value()) {
    shared_model = load_checkpoint(*checkpoint);
  }

  std::vector<BaselineRow> rows;
  for (ScenarioKind kind : kAllKinds) {
    const auto& records = sources.at(kind);
    const std::size_t train_rows = config.baseline.train_rows;
    if (records.size() < train_rows + config.test_pool_size) {
      throw std::runtime_error("baseline: " + to_string(kind) +
                               " dataset too small for " +
                               std::to_string(train_rows) + " train + " +
                               std::to_string(config.test_pool_size) +
                               " test rows");
    }
    const std::vector<SceneRecord> train_pool(records.begin(),
                                              records.begin() + train_rows);
    const std::vector<SceneRecord> test_pool(records.end() -
                                                 config.test_pool_size,
                                             records.end());

    const TabularDataset train_table = make_tabular_dataset(train_pool);
    const TreeEnsemble forest =
        fit_extra_trees(train_table, config.baseline.forest);

    const std::vector<std::string> names = metric_output_names(kind);
    std::vector<std::vector<double>> et_predicted(names.size()),
        truth(names.size());
    for (const auto& record : test_pool) {
      const std::vector<double> p =
          forest.predict(metamodel_input_row(record.scenario));
      const std::vector<double> t = metric_output_row(kind, record.metrics);
      for (std::size_t m = 0; m < names.size(); ++m) {
        et_predicted[m].push_back(p[m]);
        truth[m].push_back(t[m]);
      }
    }

    PredictorModel model;
    if (shared_model.has_value()) {
      model = *shared_model;
    } else {
      std::vector<VectorizedScene> scenes;
      scenes.reserve(train_pool.size());
      for (const auto& record : train_pool) scenes.push_back(vectorize(record));
      model = train(scenes, config.model).model;
    }
    const ErrorReport predictor_report = evaluate_pool(model, test_pool);

    for (std::size_t m = 0; m < names.size(); ++m) {
      BaselineRow row;
      row.kind = kind;
      row.metric = names[m];
      row.mae_extra_trees = mae(et_predicted[m], truth[m]);
      row.mae_predictor = predictor_report.metric_mae.at(names[m]);
      rows.push_back(row);
    }
  }

  fs::create_directories(config.out_dir);
  write_baseline_rows(
      rows, (fs::path(config.out_dir) / "baseline.csv").string());
  return rows;
}

void write_baseline_rows(const std::vector<BaselineRow>& rows,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_baseline_rows: cannot write " + path);
  }
  out << "scenario,metric,mae_extra_trees,mae_predictor\n";
  for (const auto& row : rows) {
    out << to_string(row.kind) << ',' << row.metric << ','
        << format_value(row.mae_extra_trees) << ','
        << format_value(row.mae_predictor) << '\n';
  }
}

std::vector<BaselineRow> read_baseline_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_baseline_rows: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_baseline_rows: " + path + " is empty");
  }
  std::vector<BaselineRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream stream(line);
    std::string kind, metric, et, predictor;
    if (!std::getline(stream, kind, ',') ||
        !std::getline(stream, metric, ',') || !std::getline(stream, et, ',') ||
        !std::getline(stream, predictor, ',')) {
      throw std::runtime_error("read_baseline_rows: malformed line in " + path);
    }
    rows.push_back({scenario_kind_from_string(kind), metric, std::stod(et),
                    std::stod(predictor)});
  }
  return rows;
}

double cmd_gradcheck(const ExperimentConfig& config) {
  if (config.model.precision != Precision::kDouble) {
    throw std::invalid_argument("gradcheck: requires precision \"double\"");
  }
  // Fixed probe: a healthy operating point keeps the check away from
  // rectifier kinks and the finite-difference roundoff floor, where the
  // comparison is meaningless noise.
  constexpr std::uint64_t kProbeSeed = 2;
  ModelConfig tiny = config.model;
  tiny.hidden_dim = 4;
  tiny.attention_heads = 1;
  tiny.init_seed = kProbeSeed;
  const PredictorModel model = init_model(tiny);
  const SceneRecord record =
      generate_record(ScenarioKind::kAccAndLk, kProbeSeed, 0);
  return grad_check(model, vectorize(record));
}

std::string cmd_report(const std::vector<std::string>& row_paths,
                       const std::optional<std::string>& baseline_path) {
  if (row_paths.empty() && !baseline_path.has_value()) {
    throw std::runtime_error("report: no input files");
  }
  std::vector<MixReportRow> rows;
  for (const auto& path : row_paths) rows.push_back(read_mix_row(path));

  std::ostringstream os;
  os << "# Experiment report\n";
  if (!rows.empty()) {
    os << "\n## Average displacement errors of predicted Ego trajectories\n\n";
    os << "| Row | N_ACC | N_LK | N_ACC&LK | ADE_ACC [m] | ADE_LK [m] | "
          "ADE_ACC&LK [m] |\n";
    os << "|---|---|---|---|---|---|---|\n";
    std::set<std::string> seen;
    for (const auto& row : rows) {
      const std::string label = row.mix.label();
      const bool duplicate = !seen.insert(label).second;
      os << "| " << row.mix_index << (duplicate ? " (duplicate mix)" : "")
         << " | " << row.mix.n_acc << " | " << row.mix.n_lk << " | "
         << row.mix.n_acc_lk << " | " << std::setprecision(4)
         << row.ade.at(ScenarioKind::kAcc) << " | "
         << row.ade.at(ScenarioKind::kLk) << " | "
         << row.ade.at(ScenarioKind::kAccAndLk) << " |\n";
    }

    os << "\n## Mean average errors of metrics derived from predictions\n\n";
    os << "| Row | Scenario | Metric | MAE |\n|---|---|---|---|\n";
    for (const auto& row : rows) {
      for (ScenarioKind kind : kAllKinds) {
        const auto it = row.metric_mae.find(kind);
        if (it == row.metric_mae.end()) continue;
        for (const auto& [metric, value] : it->second) {
          os << "| " << row.mix_index << " | " << to_string(kind) << " | "
             << metric << " | " << std::setprecision(4) << value << " |\n";
        }
      }
    }

    os << "\n## Run metadata\n\n";
    os << "| Row | Mix | Init seed | Best epoch | Wall time [s] |\n";
    os << "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string wall = "-";
      std::ifstream meta_in(row_paths[i] + ".meta.json");
      if (meta_in) {
        json meta;
        try {
          meta_in >> meta;
          if (meta.contains("wall_seconds")) {
            wall = format_value(
                std::round(meta["wall_seconds"].get<double>() * 10.0) / 10.0);
          }
        } catch (const json::exception&) {
          wall = "-";
        }
      }
      os << "| " << rows[i].mix_index << " | " << rows[i].mix.label() << " | "
         << rows[i].init_seed << " | " << rows[i].best_epoch << " | " << wall
         << " |\n";
    }
  }

  if (baseline_path.has_value()) {
    const std::vector<BaselineRow> baseline =
        read_baseline_rows(*baseline_path);
    os << "\n## Metamodel baseline vs motion predictor (metric MAEs)\n\n";
    os << "| Scenario | Evaluation metric | MAE extra-trees | MAE predictor "
          "|\n|---|---|---|---|\n";
    for (const auto& row : baseline) {
      os << "| " << to_string(row.kind) << " | " << row.metric << " | "
         << std::setprecision(4) << row.mae_extra_trees << " | "
         << row.mae_predictor << " |\n";
    }
  }
  return os.str();
}

}  // namespace svt
