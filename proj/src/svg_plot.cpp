#include "svt/svg_plot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace svt {

namespace {

struct Bounds {
  double x_min{1e30}, x_max{-1e30}, y_min{1e30}, y_max{-1e30};
  void add(double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
};

class SvgCanvas {
 public:
  SvgCanvas(const Bounds& b, double width) : bounds_(b), width_(width) {
    const double margin = 0.05 * std::max(b.x_max - b.x_min, 1.0);
    bounds_.x_min -= margin;
    bounds_.x_max += margin;
    bounds_.y_min -= margin;
    bounds_.y_max += margin;
    scale_ = width_ / (bounds_.x_max - bounds_.x_min);
    height_ = (bounds_.y_max - bounds_.y_min) * scale_;
  }

  double px(double x) const { return (x - bounds_.x_min) * scale_; }
  // SVG y grows downwards; world y grows upwards.
  double py(double y) const { return (bounds_.y_max - y) * scale_; }
  double height() const { return height_; }

 private:
  Bounds bounds_;
  double width_;
  double height_{0.0};
  double scale_{1.0};
};

void append_polyline(std::ostream& os, const SvgCanvas& canvas,
                     const std::vector<std::pair<double, double>>& points,
                     const std::string& color, double stroke_width,
                     bool dashed) {
  os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << stroke_width << "\"";
  if (dashed) os << " stroke-dasharray=\"6,4\"";
  os << " points=\"";
  for (const auto& [x, y] : points) {
    os << canvas.px(x) << "," << canvas.py(y) << " ";
  }
  os << "\"/>\n";
}

std::vector<std::pair<double, double>> trajectory_points(
    const Trajectory& traj) {
  std::vector<std::pair<double, double>> points;
  points.reserve(traj.size());
  for (const auto& s : traj.states) points.emplace_back(s.x, s.y);
  return points;
}

}  // namespace

void write_scene_svg(const SceneRecord& record, const Trajectory* predicted,
                     const std::string& path) {
  Bounds bounds;
  for (int i = 0; i < kLaneSampleCount; ++i) {
    bounds.add(record.lanes.sample_x[i], record.lanes.left_y[i]);
    bounds.add(record.lanes.sample_x[i], record.lanes.right_y[i]);
  }
  for (const auto& s : record.ego.states) bounds.add(s.x, s.y);
  if (record.co.has_value()) {
    for (const auto& s : record.co->states) bounds.add(s.x, s.y);
  }
  if (predicted != nullptr) {
    for (const auto& s : predicted->states) bounds.add(s.x, s.y);
  }

  const SvgCanvas canvas(bounds, 900.0);
  std::ostringstream body;
  for (const auto* boundary : {&record.lanes.left_y, &record.lanes.right_y}) {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < kLaneSampleCount; ++i) {
      points.emplace_back(record.lanes.sample_x[i], (*boundary)[i]);
    }
    append_polyline(body, canvas, points, "#999999", 1.5, false);
  }
  if (record.co.has_value()) {
    append_polyline(body, canvas, trajectory_points(*record.co), "#8033cc",
                    2.0, false);
  }
  append_polyline(body, canvas, trajectory_points(record.ego), "#2060c0", 2.0,
                  false);
  if (predicted != nullptr) {
    append_polyline(body, canvas, trajectory_points(*predicted), "#e07820",
                    2.0, true);
  }

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_scene_svg: cannot write " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\""
      << canvas.height() << "\" viewBox=\"0 0 900 " << canvas.height()
      << "\">\n"
      << body.str() << "</svg>\n";
}

}  // namespace svt
