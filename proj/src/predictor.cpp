#include "svt/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "predictor_engine.hpp"
#include "svt/rng.hpp"

namespace svt {

std::string to_string(Precision precision) {
  return precision == Precision::kSingle ? "single" : "double";
}

Precision precision_from_string(const std::string& name) {
  if (name == "single") return Precision::kSingle;
  if (name == "double") return Precision::kDouble;
  throw std::invalid_argument("unknown precision: " + name);
}

void ModelConfig::validate() const {
  if (hidden_dim < 2 || hidden_dim % 2 != 0) {
    throw std::invalid_argument("ModelConfig: hidden_dim must be even and >= 2");
  }
  if (subgraph_layers < 1) {
    throw std::invalid_argument("ModelConfig: subgraph_layers must be >= 1");
  }
  if (attention_heads < 1 || hidden_dim % attention_heads != 0) {
    throw std::invalid_argument(
        "ModelConfig: attention_heads must divide hidden_dim");
  }
  if (batch_size < 1 || epochs < 0 || learning_rate <= 0.0) {
    throw std::invalid_argument("ModelConfig: bad training settings");
  }
}

ParamLayout ParamLayout::build(const ModelConfig& config) {
  config.validate();
  ParamLayout lay;
  lay.hidden = config.hidden_dim;
  lay.half = config.hidden_dim / 2;
  lay.layers = config.subgraph_layers;
  lay.heads = config.attention_heads;
  lay.head_dim = config.hidden_dim / config.attention_heads;
  std::size_t off = 0;
  for (int l = 0; l < lay.layers; ++l) {
    const int in_dim = l == 0 ? kVectorFeatureCount : lay.hidden;
    lay.sub_in.push_back(in_dim);
    lay.sub_w.push_back(off);
    off += static_cast<std::size_t>(lay.half) * in_dim;
    lay.sub_b.push_back(off);
    off += lay.half;
  }
  const auto matrix = [&off](std::size_t rows, std::size_t cols) {
    const std::size_t at = off;
    off += rows * cols;
    return at;
  };
  lay.att_wq = matrix(lay.hidden, lay.hidden);
  lay.att_bq = matrix(lay.hidden, 1);
  lay.att_wk = matrix(lay.hidden, lay.hidden);
  lay.att_bk = matrix(lay.hidden, 1);
  lay.att_wv = matrix(lay.hidden, lay.hidden);
  lay.att_bv = matrix(lay.hidden, 1);
  lay.dec_w1 = matrix(lay.hidden, lay.hidden);
  lay.dec_b1 = matrix(lay.hidden, 1);
  lay.dec_w2 = matrix(engine::kOutputDim, lay.hidden);
  lay.dec_b2 = matrix(engine::kOutputDim, 1);
  lay.total = off;
  return lay;
}

PredictorModel init_model(const ModelConfig& config) {
  const ParamLayout lay = ParamLayout::build(config);
  PredictorModel model{config, std::vector<double>(lay.total, 0.0)};
  SplitMix64 stream = substream(config.init_seed, StreamPurpose::kModelInit);
  // Glorot-uniform weights; biases uniform in +-1/sqrt(fan_in) so no
  // layer starts exactly on a rectifier kink. Draw order: each weight
  // matrix immediately followed by its bias, in layout order.
  const auto glorot = [&](std::size_t w_offset, std::size_t b_offset,
                          int rows, int cols) {
    const double limit = std::sqrt(6.0 / (rows + cols));
    for (int i = 0; i < rows * cols; ++i) {
      model.params[w_offset + i] = stream.next_uniform(-limit, limit);
    }
    const double b_limit = 1.0 / std::sqrt(static_cast<double>(cols));
    for (int i = 0; i < rows; ++i) {
      model.params[b_offset + i] = stream.next_uniform(-b_limit, b_limit);
    }
  };
  for (int l = 0; l < lay.layers; ++l) {
    glorot(lay.sub_w[l], lay.sub_b[l], lay.half, lay.sub_in[l]);
  }
  glorot(lay.att_wq, lay.att_bq, lay.hidden, lay.hidden);
  glorot(lay.att_wk, lay.att_bk, lay.hidden, lay.hidden);
  glorot(lay.att_wv, lay.att_bv, lay.hidden, lay.hidden);
  glorot(lay.dec_w1, lay.dec_b1, lay.hidden, lay.hidden);
  glorot(lay.dec_w2, lay.dec_b2, engine::kOutputDim, lay.hidden);
  return model;
}

namespace {

std::array<double, kVectorFeatureCount> scale_features(const SceneVector& v) {
  return {v.x_start / kCoordinateScale,
          v.y_start / kCoordinateScale,
          v.x_end / kCoordinateScale,
          v.y_end / kCoordinateScale,
          static_cast<double>(v.object_type),
          static_cast<double>(v.object_id),
          v.timestamp / kTimestampScale};
}

}  // namespace

CompiledScene compile_scene(const VectorizedScene& scene) {
  if (scene.polylines.empty()) {
    throw std::invalid_argument("compile_scene: scene has no polylines");
  }
  CompiledScene compiled;
  compiled.ego_index = scene.ego_polyline_index();
  for (const auto& polyline : scene.polylines) {
    if (polyline.vectors.empty()) {
      throw std::invalid_argument("compile_scene: empty polyline");
    }
    std::vector<double> rows;
    rows.reserve(polyline.vectors.size() * kVectorFeatureCount);
    for (const auto& v : polyline.vectors) {
      for (double f : scale_features(v)) rows.push_back(f);
    }
    compiled.polylines.push_back(std::move(rows));
    compiled.vector_counts.push_back(static_cast<int>(polyline.vectors.size()));
  }
  if (scene.ego_target.size() == kPredictedStepCount) {
    for (int k = 0; k < kPredictedStepCount; ++k) {
      compiled.target[2 * k] = scene.ego_target[k].x;
      compiled.target[2 * k + 1] = scene.ego_target[k].y;
    }
  }
  return compiled;
}

std::vector<double> encode_polyline(const PredictorModel& model,
                                    const std::vector<SceneVector>& vectors) {
  if (vectors.empty()) {
    throw std::invalid_argument("encode_polyline: empty polyline");
  }
  const ParamLayout lay = ParamLayout::build(model.config);
  std::vector<double> features;
  features.reserve(vectors.size() * kVectorFeatureCount);
  for (const auto& v : vectors) {
    for (double f : scale_features(v)) features.push_back(f);
  }
  engine::PolylineTrace<double> trace;
  engine::encode_polyline_trace(lay, model.params.data(), features.data(),
                                static_cast<int>(vectors.size()), trace);
  return trace.feature;
}

namespace {

struct AttentionReadout {
  std::vector<double> att;
  std::vector<std::vector<double>> weights;  // per head
};

AttentionReadout attend_at_ego(
    const PredictorModel& model,
    const std::vector<std::vector<double>>& polyline_features,
    std::size_t ego_index) {
  if (ego_index >= polyline_features.size()) {
    throw std::invalid_argument("global_interact: ego index out of range");
  }
  const ParamLayout lay = ParamLayout::build(model.config);
  const int hidden = lay.hidden;
  const double* params = model.params.data();
  const std::size_t n = polyline_features.size();

  std::vector<double> query(hidden);
  engine::affine(params + lay.att_wq, params + lay.att_bq,
                 polyline_features[ego_index].data(), hidden, hidden,
                 query.data());
  std::vector<std::vector<double>> keys(n, std::vector<double>(hidden));
  std::vector<std::vector<double>> values(n, std::vector<double>(hidden));
  for (std::size_t p = 0; p < n; ++p) {
    if (static_cast<int>(polyline_features[p].size()) != hidden) {
      throw std::invalid_argument("global_interact: feature width mismatch");
    }
    engine::affine(params + lay.att_wk, params + lay.att_bk,
                   polyline_features[p].data(), hidden, hidden,
                   keys[p].data());
    engine::affine(params + lay.att_wv, params + lay.att_bv,
                   polyline_features[p].data(), hidden, hidden,
                   values[p].data());
  }
  AttentionReadout out;
  out.att.assign(hidden, 0.0);
  out.weights.assign(lay.heads, std::vector<double>(n));
  std::vector<double> scores(n);
  const int dh = lay.head_dim;
  for (int h = 0; h < lay.heads; ++h) {
    const int base = h * dh;
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p) {
      double s = 0.0;
      for (int d = 0; d < dh; ++d) s += query[base + d] * keys[p][base + d];
      scores[p] = s / std::sqrt(static_cast<double>(dh));
      max_score = std::max(max_score, scores[p]);
    }
    double denom = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      scores[p] = std::exp(scores[p] - max_score);
      denom += scores[p];
    }
    for (std::size_t p = 0; p < n; ++p) {
      const double w = scores[p] / denom;
      out.weights[h][p] = w;
      for (int d = 0; d < dh; ++d) {
        out.att[base + d] += w * values[p][base + d];
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> global_interact(
    const PredictorModel& model,
    const std::vector<std::vector<double>>& polyline_features,
    std::size_t ego_index) {
  return attend_at_ego(model, polyline_features, ego_index).att;
}

std::vector<std::vector<double>> global_interact_weights(
    const PredictorModel& model,
    const std::vector<std::vector<double>>& polyline_features,
    std::size_t ego_index) {
  return attend_at_ego(model, polyline_features, ego_index).weights;
}

namespace {

template <typename T>
std::vector<Vec2> forward_displacements(const ParamLayout& lay,
                                        const std::vector<T>& params,
                                        const CompiledScene& compiled) {
  engine::ForwardTrace<T> trace;
  engine::forward_trace(lay, params.data(), compiled, trace);
  std::vector<Vec2> out(kPredictedStepCount);
  for (int k = 0; k < kPredictedStepCount; ++k) {
    out[k] = {static_cast<double>(trace.output[2 * k]),
              static_cast<double>(trace.output[2 * k + 1])};
  }
  return out;
}

std::vector<float> to_single(const std::vector<double>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

std::vector<Vec2> forward(const PredictorModel& model,
                          const VectorizedScene& scene) {
  const ParamLayout lay = ParamLayout::build(model.config);
  if (model.params.size() != lay.total) {
    throw std::invalid_argument("forward: parameter count mismatch");
  }
  const CompiledScene compiled = compile_scene(scene);
  if (model.config.precision == Precision::kSingle) {
    return forward_displacements<float>(lay, to_single(model.params), compiled);
  }
  return forward_displacements<double>(lay, model.params, compiled);
}

double displacement_loss(const std::vector<Vec2>& predicted,
                         const std::vector<Vec2>& target) {
  if (predicted.size() != target.size()) {
    throw std::invalid_argument("displacement_loss: length mismatch");
  }
  if (predicted.empty()) {
    throw std::invalid_argument("displacement_loss: empty input");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    const double dx = predicted[k].x - target[k].x;
    const double dy = predicted[k].y - target[k].y;
    acc += dx * dx + dy * dy;
  }
  return acc / static_cast<double>(predicted.size());
}

double batch_loss_and_gradient(const PredictorModel& model,
                               const std::vector<CompiledScene>& scenes,
                               const std::vector<int>& indices,
                               std::vector<double>& grad, bool parallel) {
  const ParamLayout lay = ParamLayout::build(model.config);
  if (indices.empty()) {
    throw std::invalid_argument("batch_loss_and_gradient: empty batch");
  }
  const int n = static_cast<int>(indices.size());
  std::vector<std::vector<double>> slots(
      n, std::vector<double>(lay.total, 0.0));
  std::vector<double> losses(n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    losses[i] = engine::scene_loss_and_gradient(
        lay, model.params.data(), scenes[indices[i]], slots[i].data());
  }
  (void)parallel;

  // Fixed-order reduction keeps the result independent of thread count.
  grad.assign(lay.total, 0.0);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    loss += losses[i];
    for (std::size_t j = 0; j < lay.total; ++j) grad[j] += slots[i][j];
  }
  const double inv = 1.0 / n;
  loss *= inv;
  for (double& g : grad) g *= inv;
  return loss;
}

double dataset_loss(const PredictorModel& model,
                    const std::vector<CompiledScene>& scenes, bool parallel) {
  const ParamLayout lay = ParamLayout::build(model.config);
  if (scenes.empty()) {
    throw std::invalid_argument("dataset_loss: empty dataset");
  }
  const int n = static_cast<int>(scenes.size());
  std::vector<double> losses(n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    losses[i] = engine::scene_loss(lay, model.params.data(), scenes[i]);
  }
  (void)parallel;
  double acc = 0.0;
  for (double l : losses) acc += l;
  return acc / n;
}

namespace {

// Adam training loop in the requested arithmetic type. The parameter
// master copy, optimizer state, and every forward/backward run in T.
template <typename T>
TrainResult train_impl(const std::vector<CompiledScene>& compiled,
                       const ModelConfig& config) {
  const ParamLayout lay = ParamLayout::build(config);
  const PredictorModel initial = init_model(config);
  std::vector<T> params(initial.params.begin(), initial.params.end());

  // Deterministic 90/10 split; tiny datasets keep at least one training
  // sample and fall back to validating on the training set.
  const std::size_t n = compiled.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 split_stream =
      substream(config.init_seed, StreamPurpose::kTrainValSplit);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[split_stream.next_below(i + 1)]);
  }
  std::size_t n_train = static_cast<std::size_t>(0.9 * static_cast<double>(n));
  n_train = std::max<std::size_t>(1, n_train);
  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  std::vector<CompiledScene> val_scenes;
  for (std::size_t i = n_train; i < n; ++i) val_scenes.push_back(compiled[order[i]]);
  if (val_scenes.empty()) {
    for (int i : train_idx) val_scenes.push_back(compiled[i]);
  }

  const int n_params = static_cast<int>(lay.total);
  std::vector<T> m(n_params, T(0)), v(n_params, T(0));
  const T beta1 = T(0.9), beta2 = T(0.999), eps = T(1e-8);
  const T lr = static_cast<T>(config.learning_rate);
  long step = 0;

  TrainResult result;
  result.model.config = config;
  std::vector<T> best_params = params;
  double best_val = std::numeric_limits<double>::infinity();
  result.best_epoch = 0;

  const int n_slots = static_cast<int>(
      std::min<std::size_t>(config.batch_size, train_idx.size()));
  std::vector<std::vector<T>> slots(n_slots,
                                    std::vector<T>(lay.total, T(0)));
  std::vector<T> losses(n_slots, T(0));
  std::vector<T> grad(lay.total, T(0));

  const auto eval_loss = [&](const std::vector<CompiledScene>& scenes) {
    const int count = static_cast<int>(scenes.size());
    std::vector<T> per(count, T(0));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) {
      per[i] = engine::scene_loss(lay, params.data(), scenes[i]);
    }
    T acc = T(0);
    for (T l : per) acc += l;
    return static_cast<double>(acc / T(count));
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    SplitMix64 shuffle_stream = substream(
        config.init_seed, StreamPurpose::kEpochShuffle,
        static_cast<std::uint64_t>(epoch));
    for (std::size_t i = train_idx.size() - 1; i > 0; --i) {
      std::swap(train_idx[i], train_idx[shuffle_stream.next_below(i + 1)]);
    }

    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < train_idx.size();
         start += config.batch_size) {
      const int batch = static_cast<int>(
          std::min<std::size_t>(config.batch_size, train_idx.size() - start));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (int i = 0; i < batch; ++i) {
        std::fill(slots[i].begin(), slots[i].end(), T(0));
        losses[i] = engine::scene_loss_and_gradient(
            lay, params.data(), compiled[train_idx[start + i]],
            slots[i].data());
      }
      // Fixed-order reduction for reproducibility across thread counts.
      std::fill(grad.begin(), grad.end(), T(0));
      T batch_loss = T(0);
      for (int i = 0; i < batch; ++i) {
        batch_loss += losses[i];
        for (int j = 0; j < n_params; ++j) grad[j] += slots[i][j];
      }
      const T inv = T(1) / T(batch);
      for (int j = 0; j < n_params; ++j) grad[j] *= inv;
      epoch_loss += static_cast<double>(batch_loss);
      seen += batch;

      ++step;
      const T bc1 = T(1) - std::pow(beta1, static_cast<T>(step));
      const T bc2 = T(1) - std::pow(beta2, static_cast<T>(step));
      for (int j = 0; j < n_params; ++j) {
        m[j] = beta1 * m[j] + (T(1) - beta1) * grad[j];
        v[j] = beta2 * v[j] + (T(1) - beta2) * grad[j] * grad[j];
        params[j] -= lr * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + eps);
      }
    }

    result.train_loss.push_back(epoch_loss / static_cast<double>(seen));
    const double val = eval_loss(val_scenes);
    result.val_loss.push_back(val);
    if (val < best_val) {
      best_val = val;
      best_params = params;
      result.best_epoch = epoch;
    }
  }

  result.model.params.assign(best_params.begin(), best_params.end());
  return result;
}

}  // namespace

TrainResult train(const std::vector<VectorizedScene>& dataset,
                  const ModelConfig& config) {
  config.validate();
  if (dataset.empty()) {
    throw std::invalid_argument("train: empty dataset");
  }
  std::vector<CompiledScene> compiled;
  compiled.reserve(dataset.size());
  for (const auto& scene : dataset) compiled.push_back(compile_scene(scene));
  if (config.precision == Precision::kSingle) {
    return train_impl<float>(compiled, config);
  }
  return train_impl<double>(compiled, config);
}

double grad_check(const PredictorModel& model, const VectorizedScene& scene,
                  double gradient_perturbation) {
  if (model.config.precision != Precision::kDouble) {
    throw std::invalid_argument("grad_check: requires double precision");
  }
  const ParamLayout lay = ParamLayout::build(model.config);
  const CompiledScene compiled = compile_scene(scene);

  std::vector<double> analytic(lay.total, 0.0);
  engine::scene_loss_and_gradient(lay, model.params.data(), compiled,
                                  analytic.data());
  analytic[0] += gradient_perturbation;

  std::vector<double> params = model.params;
  const double step = 1e-6;
  double max_rel = 0.0;
  for (std::size_t j = 0; j < lay.total; ++j) {
    const double saved = params[j];
    params[j] = saved + step;
    const double up = engine::scene_loss(lay, params.data(), compiled);
    params[j] = saved - step;
    const double down = engine::scene_loss(lay, params.data(), compiled);
    params[j] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom =
        std::max({std::abs(analytic[j]), std::abs(numeric), 1e-12});
    max_rel = std::max(max_rel, std::abs(analytic[j] - numeric) / denom);
  }
  return max_rel;
}

}  // namespace svt
