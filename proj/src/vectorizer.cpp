#include "svt/vectorizer.hpp"

#include <cmath>
#include <stdexcept>

namespace svt {

std::size_t VectorizedScene::ego_polyline_index() const {
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    if (polylines[i].object_type == kObjectTypeEgo) return i;
  }
  throw std::logic_error("VectorizedScene: no ego polyline");
}

std::size_t VectorizedScene::total_vectors() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.vectors.size();
  return n;
}

namespace {

Polyline chain_polyline(const std::vector<Vec2>& points,
                        const std::vector<double>& timestamps, int object_type,
                        int object_id) {
  Polyline polyline;
  polyline.object_id = object_id;
  polyline.object_type = object_type;
  polyline.vectors.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    SceneVector v;
    v.x_start = points[i].x;
    v.y_start = points[i].y;
    v.x_end = points[i + 1].x;
    v.y_end = points[i + 1].y;
    v.object_type = object_type;
    v.object_id = object_id;
    v.timestamp = timestamps[i + 1];
    polyline.vectors.push_back(v);
  }
  return polyline;
}

}  // namespace

VectorizedScene vectorize(const SceneRecord& record) {
  if (record.ego.size() != kTrajectoryLength) {
    throw std::invalid_argument("vectorize: ego trajectory must have 26 states");
  }
  VectorizedScene scene;
  const Vec2 offset{record.ego[0].x, record.ego[0].y};
  scene.normalization_offset = offset;

  const auto normalized = [&offset](double x, double y) {
    return Vec2{x - offset.x, y - offset.y};
  };

  // Lane boundaries: timestamps all zero.
  const std::vector<double> lane_times(kLaneSampleCount, 0.0);
  int next_id = 0;
  for (const auto* boundary : {&record.lanes.left_y, &record.lanes.right_y}) {
    std::vector<Vec2> points;
    points.reserve(kLaneSampleCount);
    for (int i = 0; i < kLaneSampleCount; ++i) {
      points.push_back(normalized(record.lanes.sample_x[i], (*boundary)[i]));
    }
    scene.polylines.push_back(
        chain_polyline(points, lane_times, kObjectTypeLane, next_id++));
  }

  // Co trajectory: each vector stamped with its segment end time.
  if (record.co.has_value()) {
    if (record.co->size() != kTrajectoryLength) {
      throw std::invalid_argument("vectorize: co trajectory must have 26 states");
    }
    std::vector<Vec2> points;
    std::vector<double> times;
    points.reserve(record.co->size());
    times.reserve(record.co->size());
    for (const auto& s : record.co->states) {
      points.push_back(normalized(s.x, s.y));
      times.push_back(s.t);
    }
    scene.polylines.push_back(
        chain_polyline(points, times, kObjectTypeCo, next_id++));
  }

  // Ego input: the single t=0 -> t=0.2 vector.
  {
    const std::vector<Vec2> points{normalized(record.ego[0].x, record.ego[0].y),
                                   normalized(record.ego[1].x, record.ego[1].y)};
    const std::vector<double> times{record.ego[0].t, record.ego[1].t};
    scene.polylines.push_back(
        chain_polyline(points, times, kObjectTypeEgo, next_id++));
  }

  // The remaining 24 Ego displacements are the prediction target.
  scene.ego_target.reserve(kPredictedStepCount);
  for (int k = 1; k + 1 < kTrajectoryLength; ++k) {
    scene.ego_target.push_back({record.ego[k + 1].x - record.ego[k].x,
                                record.ego[k + 1].y - record.ego[k].y});
  }
  return scene;
}

std::vector<std::array<double, kVectorFeatureCount>> feature_matrix(
    const VectorizedScene& scene) {
  if (scene.polylines.empty()) {
    throw std::invalid_argument("feature_matrix: scene has no polylines");
  }
  std::vector<std::array<double, kVectorFeatureCount>> rows;
  rows.reserve(scene.total_vectors());
  for (const auto& polyline : scene.polylines) {
    if (polyline.vectors.empty()) {
      throw std::invalid_argument("feature_matrix: empty polyline");
    }
    for (const auto& v : polyline.vectors) {
      rows.push_back(v.flatten());
    }
  }
  return rows;
}

Trajectory reconstruct_trajectory(const VectorizedScene& scene,
                                  const std::vector<Vec2>& predicted) {
  if (predicted.size() != kPredictedStepCount) {
    throw std::invalid_argument("reconstruct_trajectory: expected 24 vectors");
  }
  const Polyline& ego = scene.polylines[scene.ego_polyline_index()];
  const SceneVector& initial = ego.vectors.front();

  std::vector<Vec2> positions;
  positions.reserve(kTrajectoryLength);
  positions.push_back({initial.x_start + scene.normalization_offset.x,
                       initial.y_start + scene.normalization_offset.y});
  positions.push_back({initial.x_end + scene.normalization_offset.x,
                       initial.y_end + scene.normalization_offset.y});
  for (const Vec2& d : predicted) {
    positions.push_back(
        {positions.back().x + d.x, positions.back().y + d.y});
  }

  Trajectory traj;
  traj.states.resize(kTrajectoryLength);
  for (int k = 0; k < kTrajectoryLength; ++k) {
    // Outgoing displacement; the last state repeats the previous one.
    const int d = k + 1 < kTrajectoryLength ? k : k - 1;
    const double dx = positions[d + 1].x - positions[d].x;
    const double dy = positions[d + 1].y - positions[d].y;
    traj.states[k] = {kTimeStep * k, positions[k].x, positions[k].y,
                      std::atan2(dy, dx), std::hypot(dx, dy) / kTimeStep};
  }
  return traj;
}

}  // namespace svt
