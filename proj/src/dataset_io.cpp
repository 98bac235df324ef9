#include "svt/dataset_io.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "svt/rng.hpp"

namespace svt {

using nlohmann::json;

std::string MixSpec::label() const {
  std::ostringstream os;
  os << "ACC-" << n_acc << "_LK-" << n_lk << "_ACC&LK-" << n_acc_lk;
  return os.str();
}

namespace {

json trajectory_to_json(const Trajectory& traj) {
  json rows = json::array();
  for (const auto& s : traj.states) {
    rows.push_back({s.t, s.x, s.y, s.heading, s.speed});
  }
  return rows;
}

Trajectory trajectory_from_json(const json& rows) {
  Trajectory traj;
  traj.states.reserve(rows.size());
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 5) {
      throw std::runtime_error("trajectory row must have 5 entries");
    }
    traj.states.push_back({row[0].get<double>(), row[1].get<double>(),
                           row[2].get<double>(), row[3].get<double>(),
                           row[4].get<double>()});
  }
  return traj;
}

json record_to_json(const SceneRecord& record) {
  const ConcreteScenario& sc = record.scenario;
  json scenario{{"kind", to_string(sc.kind)}, {"a0", sc.a0}, {"a1", sc.a1},
                {"a2", sc.a2},                {"a3", sc.a3},
                {"v_ego", sc.v_ego},          {"seed", sc.seed}};
  if (sc.co.has_value()) {
    scenario["x_co"] = sc.co->x_co;
    scenario["v_co"] = sc.co->v_co;
    scenario["t_v_co"] = sc.co->t_v_co;
    scenario["a_co"] = sc.co->a_co;
    scenario["t_a_co"] = sc.co->t_a_co;
  }
  json lanes{{"sample_x", record.lanes.sample_x},
             {"center_y", record.lanes.center_y},
             {"half_width", record.lanes.half_width},
             {"left_y", record.lanes.left_y},
             {"right_y", record.lanes.right_y}};
  json metrics{{"a_min", record.metrics.a_min},
               {"p_lat_max", record.metrics.p_lat_max}};
  metrics["d_min"] = record.metrics.d_min.has_value()
                         ? json(*record.metrics.d_min)
                         : json(nullptr);
  json doc{{"schema_version", kSceneSchemaVersion},
           {"scenario", scenario},
           {"lanes", lanes},
           {"ego", trajectory_to_json(record.ego)},
           {"metrics", metrics}};
  doc["co"] = record.co.has_value() ? trajectory_to_json(*record.co)
                                    : json(nullptr);
  return doc;
}

template <std::size_t N>
std::array<double, N> array_from_json(const json& values,
                                      const std::string& name) {
  if (!values.is_array() || values.size() != N) {
    throw std::runtime_error(name + " must have " + std::to_string(N) +
                             " entries");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = values[i].get<double>();
  return out;
}

SceneRecord record_from_json(const json& doc) {
  if (!doc.contains("schema_version")) {
    throw std::runtime_error("missing schema_version");
  }
  if (doc["schema_version"].get<int>() != kSceneSchemaVersion) {
    throw std::runtime_error(
        "unsupported schema_version " + doc["schema_version"].dump() +
        " (expected " + std::to_string(kSceneSchemaVersion) + ")");
  }
  SceneRecord record;
  const json& sc = doc.at("scenario");
  record.scenario.kind =
      scenario_kind_from_string(sc.at("kind").get<std::string>());
  record.scenario.a0 = sc.at("a0").get<double>();
  record.scenario.a1 = sc.at("a1").get<double>();
  record.scenario.a2 = sc.at("a2").get<double>();
  record.scenario.a3 = sc.at("a3").get<double>();
  record.scenario.v_ego = sc.at("v_ego").get<double>();
  record.scenario.seed = sc.at("seed").get<std::uint64_t>();
  if (sc.contains("x_co")) {
    CoParams co;
    co.x_co = sc.at("x_co").get<double>();
    co.v_co = sc.at("v_co").get<double>();
    co.t_v_co = sc.at("t_v_co").get<double>();
    co.a_co = sc.at("a_co").get<double>();
    co.t_a_co = sc.at("t_a_co").get<double>();
    record.scenario.co = co;
  }
  const json& lanes = doc.at("lanes");
  record.lanes.sample_x =
      array_from_json<kLaneSampleCount>(lanes.at("sample_x"), "sample_x");
  record.lanes.center_y =
      array_from_json<kLaneSampleCount>(lanes.at("center_y"), "center_y");
  record.lanes.half_width = lanes.at("half_width").get<double>();
  record.lanes.left_y =
      array_from_json<kLaneSampleCount>(lanes.at("left_y"), "left_y");
  record.lanes.right_y =
      array_from_json<kLaneSampleCount>(lanes.at("right_y"), "right_y");
  record.ego = trajectory_from_json(doc.at("ego"));
  if (!doc.at("co").is_null()) {
    record.co = trajectory_from_json(doc.at("co"));
  }
  const json& metrics = doc.at("metrics");
  record.metrics.a_min = metrics.at("a_min").get<double>();
  record.metrics.p_lat_max = metrics.at("p_lat_max").get<double>();
  if (!metrics.at("d_min").is_null()) {
    record.metrics.d_min = metrics.at("d_min").get<double>();
  }
  return record;
}

}  // namespace

std::size_t write_scenes(const std::vector<SceneRecord>& records,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_scenes: cannot write " + path);
  }
  for (const auto& record : records) {
    out << record_to_json(record).dump() << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("write_scenes: I/O failure on " + path);
  }
  return records.size();
}

std::vector<SceneRecord> read_scenes(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_scenes: cannot open " + path);
  }
  std::vector<SceneRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("read_scenes: " + path + " line " +
                               std::to_string(line_number) +
                               ": malformed JSON: " + e.what());
    }
    SceneRecord record;
    try {
      record = record_from_json(doc);
    } catch (const std::exception& e) {
      throw std::runtime_error("read_scenes: " + path + " line " +
                               std::to_string(line_number) + ": " + e.what());
    }
    const auto violations = validate(record);
    if (!violations.empty()) {
      throw std::runtime_error("read_scenes: " + path + " line " +
                               std::to_string(line_number) +
                               ": invariant violation: " + violations.front());
    }
    records.push_back(std::move(record));
  }
  return records;
}

ScenePools assemble_mix(
    const MixSpec& spec,
    const std::map<ScenarioKind, std::vector<SceneRecord>>& sources,
    std::size_t test_pool_size) {
  if (spec.total() == 0) {
    throw std::invalid_argument("assemble_mix: all mix counts are zero");
  }
  ScenePools pools;
  const std::vector<std::pair<ScenarioKind, std::size_t>> wanted{
      {ScenarioKind::kAcc, spec.n_acc},
      {ScenarioKind::kLk, spec.n_lk},
      {ScenarioKind::kAccAndLk, spec.n_acc_lk}};
  for (const auto& [kind, count] : wanted) {
    const auto it = sources.find(kind);
    const std::size_t available = it == sources.end() ? 0 : it->second.size();
    if (available < count + test_pool_size) {
      throw std::runtime_error(
          "assemble_mix: " + to_string(kind) + " source holds " +
          std::to_string(available) + " records, need " +
          std::to_string(count) + " training + " +
          std::to_string(test_pool_size) + " test");
    }
    const auto& records = it->second;
    pools.training.insert(pools.training.end(), records.begin(),
                          records.begin() + count);
    pools.test[kind].assign(records.end() - test_pool_size, records.end());
  }
  return pools;
}

std::pair<std::vector<SceneRecord>, std::vector<SceneRecord>> split_train_val(
    const std::vector<SceneRecord>& pool, double ratio, std::uint64_t seed) {
  if (pool.size() < 10) {
    throw std::invalid_argument("split_train_val: pool too small");
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 stream = substream(seed, StreamPurpose::kTrainValSplit);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[stream.next_below(i + 1)]);
  }
  const std::size_t n_train =
      static_cast<std::size_t>(ratio * static_cast<double>(pool.size()));
  std::pair<std::vector<SceneRecord>, std::vector<SceneRecord>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.first : out.second).push_back(pool[order[i]]);
  }
  return out;
}

}  // namespace svt
