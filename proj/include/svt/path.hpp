#pragma once

#include <vector>

#include "svt/scenario.hpp"

namespace svt {

struct Vec2 {
  double x{0.0};
  double y{0.0};
};

// Piecewise-linear centerline through the noisy lane sample points.
// Longitudinal coordinates are strictly increasing, so x-lookups are
// unique. Arc positions beyond the sampled range extend linearly along
// the end tangents.
class CenterlinePath {
 public:
  CenterlinePath(const std::vector<double>& xs, const std::vector<double>& ys);
  explicit CenterlinePath(const LaneGeometry& lanes);

  double total_length() const { return cumulative_.back(); }

  // Lateral coordinate at longitudinal x (extends linearly past the ends).
  double y_at_x(double x) const;

  // Arc length of the path point with longitudinal coordinate x.
  double arc_at_x(double x) const;

  Vec2 point_at_arc(double s) const;
  double heading_at_arc(double s) const;

  // Arc length of the closest path point (clamped to the sampled range).
  double project_arc(const Vec2& p) const;

  // First path point at Euclidean distance `lookahead` from p, searching
  // forward from arc s_start. Clamps to the final sample point when no
  // crossing exists before the road end.
  Vec2 lookahead_point(const Vec2& p, double s_start, double lookahead) const;

 private:
  std::size_t segment_at_arc(double s) const;

  std::vector<Vec2> points_;
  std::vector<double> cumulative_;  // arc length at each point, [0] = 0
};

}  // namespace svt
