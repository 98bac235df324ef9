#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "svt/predictor.hpp"

namespace svt {

namespace {

constexpr int kCheckpointVersion = 1;

nlohmann::json shape_manifest(const ParamLayout& lay) {
  nlohmann::json shapes = nlohmann::json::array();
  const auto add = [&shapes](const std::string& name, std::size_t offset,
                             int rows, int cols) {
    shapes.push_back({{"name", name},
                      {"offset", offset},
                      {"rows", rows},
                      {"cols", cols}});
  };
  for (int l = 0; l < lay.layers; ++l) {
    const std::string tag = std::to_string(l);
    add("subgraph_w" + tag, lay.sub_w[l], lay.half, lay.sub_in[l]);
    add("subgraph_b" + tag, lay.sub_b[l], lay.half, 1);
  }
  add("att_wq", lay.att_wq, lay.hidden, lay.hidden);
  add("att_bq", lay.att_bq, lay.hidden, 1);
  add("att_wk", lay.att_wk, lay.hidden, lay.hidden);
  add("att_bk", lay.att_bk, lay.hidden, 1);
  add("att_wv", lay.att_wv, lay.hidden, lay.hidden);
  add("att_bv", lay.att_bv, lay.hidden, 1);
  add("dec_w1", lay.dec_w1, lay.hidden, lay.hidden);
  add("dec_b1", lay.dec_b1, lay.hidden, 1);
  add("dec_w2", lay.dec_w2, 2 * kPredictedStepCount, lay.hidden);
  add("dec_b2", lay.dec_b2, 2 * kPredictedStepCount, 1);
  return shapes;
}

}  // namespace

void save_checkpoint(const PredictorModel& model, const std::string& path) {
  const ParamLayout lay = ParamLayout::build(model.config);
  if (model.params.size() != lay.total) {
    throw std::invalid_argument("save_checkpoint: parameter count mismatch");
  }
  nlohmann::json doc;
  doc["format_version"] = kCheckpointVersion;
  doc["config"] = {{"hidden_dim", model.config.hidden_dim},
                   {"subgraph_layers", model.config.subgraph_layers},
                   {"attention_heads", model.config.attention_heads},
                   {"learning_rate", model.config.learning_rate},
                   {"batch_size", model.config.batch_size},
                   {"epochs", model.config.epochs},
                   {"init_seed", model.config.init_seed},
                   {"precision", to_string(model.config.precision)}};
  doc["shapes"] = shape_manifest(lay);
  doc["params"] = model.params;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_checkpoint: cannot write " + path);
  }
  out << doc.dump() << '\n';
}

PredictorModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_checkpoint: cannot open " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_checkpoint: malformed JSON in " + path +
                             ": " + e.what());
  }
  if (!doc.contains("format_version") ||
      doc["format_version"].get<int>() != kCheckpointVersion) {
    throw std::runtime_error("load_checkpoint: unsupported format version");
  }
  const auto& cfg = doc.at("config");
  PredictorModel model;
  model.config.hidden_dim = cfg.at("hidden_dim").get<int>();
  model.config.subgraph_layers = cfg.at("subgraph_layers").get<int>();
  model.config.attention_heads = cfg.at("attention_heads").get<int>();
  model.config.learning_rate = cfg.at("learning_rate").get<double>();
  model.config.batch_size = cfg.at("batch_size").get<int>();
  model.config.epochs = cfg.at("epochs").get<int>();
  model.config.init_seed = cfg.at("init_seed").get<std::uint64_t>();
  model.config.precision =
      precision_from_string(cfg.at("precision").get<std::string>());
  model.params = doc.at("params").get<std::vector<double>>();
  const ParamLayout lay = ParamLayout::build(model.config);
  if (model.params.size() != lay.total) {
    throw std::runtime_error("load_checkpoint: parameter count mismatch");
  }
  return model;
}

}  // namespace svt
