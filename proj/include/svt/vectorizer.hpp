#pragma once

#include <array>
#include <vector>

#include "svt/path.hpp"
#include "svt/scenario.hpp"

namespace svt {

// Object type codes carried in the vector features.
inline constexpr int kObjectTypeLane = 0;
inline constexpr int kObjectTypeCo = 1;
inline constexpr int kObjectTypeEgo = 2;

inline constexpr int kVectorFeatureCount = 7;
inline constexpr int kPredictedStepCount = 24;

// One vector of a polyline: 7 numeric features when flattened.
struct SceneVector {
  double x_start{0.0};
  double y_start{0.0};
  double x_end{0.0};
  double y_end{0.0};
  int object_type{0};
  int object_id{0};
  double timestamp{0.0};  // 0 for lanes, vector end time for vehicles

  std::array<double, kVectorFeatureCount> flatten() const {
    return {x_start,
            y_start,
            x_end,
            y_end,
            static_cast<double>(object_type),
            static_cast<double>(object_id),
            timestamp};
  }
};

struct Polyline {
  int object_id{0};
  int object_type{0};
  std::vector<SceneVector> vectors;
};

// The scenario embedding: lane boundary polylines, the Co's trajectory
// polyline, and the Ego's initial vector, all translated so the Ego's
// t=0 position is the origin. ego_target holds the 24 displacement
// vectors the predictor has to produce.
struct VectorizedScene {
  std::vector<Polyline> polylines;
  std::vector<Vec2> ego_target;
  Vec2 normalization_offset{};  // the subtracted translation

  std::size_t ego_polyline_index() const;
  std::size_t total_vectors() const;
  std::size_t feature_count() const {
    return total_vectors() * kVectorFeatureCount;
  }
};

VectorizedScene vectorize(const SceneRecord& record);

// Dense num_vectors x 7 matrix; rows follow polyline order (lanes by
// object_id, then Co, then Ego). Throws on scenes with empty polylines.
std::vector<std::array<double, kVectorFeatureCount>> feature_matrix(
    const VectorizedScene& scene);

// Inverse of vectorization for the Ego: cumulative sum of the predicted
// displacements from the Ego input vector's end, un-normalized back to
// world coordinates. Headings and speeds derive from each state's
// outgoing displacement (the final state repeats the one before it).
Trajectory reconstruct_trajectory(const VectorizedScene& scene,
                                  const std::vector<Vec2>& predicted);

}  // namespace svt
