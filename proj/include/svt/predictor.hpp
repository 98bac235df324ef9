#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "svt/vectorizer.hpp"

namespace svt {

enum class Precision { kSingle, kDouble };

std::string to_string(Precision precision);
Precision precision_from_string(const std::string& name);

// Input feature scaling constants applied before the encoder: coordinates
// in tens of meters, timestamps as a fraction of the horizon, type and id
// as small integers.
inline constexpr double kCoordinateScale = 10.0;
inline constexpr double kTimestampScale = 5.0;

struct ModelConfig {
  int hidden_dim{32};        // even; per-layer encoders emit hidden_dim/2
  int subgraph_layers{3};
  int attention_heads{1};    // must divide hidden_dim
  static constexpr int output_steps = kPredictedStepCount;
  double learning_rate{1e-3};
  int batch_size{32};
  int epochs{150};
  std::uint64_t init_seed{1};
  Precision precision{Precision::kDouble};

  void validate() const;
};

// Flat offsets of every weight matrix and bias in the parameter vector.
struct ParamLayout {
  int hidden{0};
  int half{0};
  int layers{0};
  int heads{0};
  int head_dim{0};
  std::vector<std::size_t> sub_w, sub_b;  // per subgraph layer
  std::vector<int> sub_in;                // input width per subgraph layer
  std::size_t att_wq{0}, att_bq{0}, att_wk{0}, att_bk{0}, att_wv{0}, att_bv{0};
  std::size_t dec_w1{0}, dec_b1{0}, dec_w2{0}, dec_b2{0};
  std::size_t total{0};

  static ParamLayout build(const ModelConfig& config);
};

struct PredictorModel {
  ModelConfig config;
  std::vector<double> params;
};

// Fresh model with seed-driven Glorot-uniform weights and zero biases.
PredictorModel init_model(const ModelConfig& config);

// Scene preprocessed for the network: scaled feature rows per polyline
// plus the flattened target displacements.
struct CompiledScene {
  std::vector<std::vector<double>> polylines;  // row-major n_i x 7
  std::vector<int> vector_counts;
  std::size_t ego_index{0};
  std::array<double, 2 * kPredictedStepCount> target{};
};

CompiledScene compile_scene(const VectorizedScene& scene);

// Polyline subgraph: per layer a linear map + rectifier whose output is
// concatenated with its polyline-wise max, then a final max over vectors.
std::vector<double> encode_polyline(const PredictorModel& model,
                                    const std::vector<SceneVector>& vectors);

// Scaled dot-product self-attention over polyline features; returns the
// attended feature at the Ego node.
std::vector<double> global_interact(
    const PredictorModel& model,
    const std::vector<std::vector<double>>& polyline_features,
    std::size_t ego_index);

// The Ego query's attention distribution, one vector per head. Each
// vector is non-negative and sums to 1.
std::vector<std::vector<double>> global_interact_weights(
    const PredictorModel& model,
    const std::vector<std::vector<double>>& polyline_features,
    std::size_t ego_index);

// Full pass: 24 predicted displacement vectors.
std::vector<Vec2> forward(const PredictorModel& model,
                          const VectorizedScene& scene);

// Mean squared Euclidean displacement error over the 24 steps.
double displacement_loss(const std::vector<Vec2>& predicted,
                         const std::vector<Vec2>& target);

// Mean loss over the selected scenes; writes the mean gradient to `grad`
// (resized to the layout total). The parallel path computes per-sample
// gradients concurrently and reduces them in fixed index order, so it is
// bit-identical to the serial path.
double batch_loss_and_gradient(const PredictorModel& model,
                               const std::vector<CompiledScene>& scenes,
                               const std::vector<int>& indices,
                               std::vector<double>& grad, bool parallel);

// Mean forward loss over a compiled dataset (no gradients).
double dataset_loss(const PredictorModel& model,
                    const std::vector<CompiledScene>& scenes, bool parallel);

struct TrainResult {
  PredictorModel model;  // parameters of the best-validation epoch
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int best_epoch{0};
};

// Adam training with deterministic seed-driven initialization, shuffling,
// and a 90/10 train/validation split. Bit-reproducible for a fixed config
// regardless of thread count.
TrainResult train(const std::vector<VectorizedScene>& dataset,
                  const ModelConfig& config);

// Max relative error between analytic gradients and central finite
// differences over every parameter. Double precision only.
// `gradient_perturbation` is a test hook added to one analytic component.
double grad_check(const PredictorModel& model, const VectorizedScene& scene,
                  double gradient_perturbation = 0.0);

// Versioned JSON checkpoint; numbers round-trip bit-exactly.
void save_checkpoint(const PredictorModel& model, const std::string& path);
PredictorModel load_checkpoint(const std::string& path);

}  // namespace svt
