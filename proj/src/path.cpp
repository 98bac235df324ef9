#include "svt/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svt {

namespace {

double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }

}  // namespace

CenterlinePath::CenterlinePath(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("CenterlinePath: need >= 2 sample points");
  }
  points_.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && xs[i] <= xs[i - 1]) {
      throw std::invalid_argument("CenterlinePath: x must be increasing");
    }
    points_.push_back({xs[i], ys[i]});
  }
  cumulative_.resize(points_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + norm(sub(points_[i], points_[i - 1]));
  }
}

CenterlinePath::CenterlinePath(const LaneGeometry& lanes)
    : CenterlinePath(
          std::vector<double>(lanes.sample_x.begin(), lanes.sample_x.end()),
          std::vector<double>(lanes.center_y.begin(), lanes.center_y.end())) {}

double CenterlinePath::y_at_x(double x) const {
  std::size_t i = 0;
  if (x >= points_.back().x) {
    i = points_.size() - 2;
  } else {
    while (i + 2 < points_.size() && points_[i + 1].x <= x) ++i;
  }
  const Vec2& a = points_[i];
  const Vec2& b = points_[i + 1];
  return a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y);
}

double CenterlinePath::arc_at_x(double x) const {
  std::size_t i = 0;
  if (x >= points_.back().x) {
    i = points_.size() - 2;
  } else {
    while (i + 2 < points_.size() && points_[i + 1].x <= x) ++i;
  }
  const Vec2& a = points_[i];
  const Vec2& b = points_[i + 1];
  const double frac = (x - a.x) / (b.x - a.x);
  return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
}

std::size_t CenterlinePath::segment_at_arc(double s) const {
  if (s <= 0.0) return 0;
  if (s >= cumulative_.back()) return points_.size() - 2;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  return static_cast<std::size_t>(it - cumulative_.begin()) - 1;
}

Vec2 CenterlinePath::point_at_arc(double s) const {
  const std::size_t i = segment_at_arc(s);
  const Vec2& a = points_[i];
  const Vec2& b = points_[i + 1];
  const double len = cumulative_[i + 1] - cumulative_[i];
  const double frac = (s - cumulative_[i]) / len;
  return {a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y)};
}

double CenterlinePath::heading_at_arc(double s) const {
  const std::size_t i = segment_at_arc(s);
  const Vec2 d = sub(points_[i + 1], points_[i]);
  return std::atan2(d.y, d.x);
}

double CenterlinePath::project_arc(const Vec2& p) const {
  double best_dist2 = std::numeric_limits<double>::infinity();
  double best_arc = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 u = sub(points_[i + 1], a);
    const double len2 = dot(u, u);
    double t = dot(sub(p, a), u) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q{a.x + t * u.x, a.y + t * u.y};
    const Vec2 d = sub(p, q);
    const double dist2 = dot(d, d);
    if (dist2 < best_dist2) {
      best_dist2 = dist2;
      best_arc = cumulative_[i] + t * (cumulative_[i + 1] - cumulative_[i]);
    }
  }
  return best_arc;
}

Vec2 CenterlinePath::lookahead_point(const Vec2& p, double s_start,
                                     double lookahead) const {
  const double r2 = lookahead * lookahead;
  double s = std::max(0.0, s_start);
  for (std::size_t i = segment_at_arc(s); i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 u = sub(points_[i + 1], a);
    const double seg_len = cumulative_[i + 1] - cumulative_[i];
    const double t_lo =
        std::max(0.0, (s - cumulative_[i]) / seg_len);
    // Solve |a + t*u - p|^2 = lookahead^2 for t in [t_lo, 1].
    const Vec2 w = sub(a, p);
    const double qa = dot(u, u);
    const double qb = 2.0 * dot(w, u);
    const double qc = dot(w, w) - r2;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Earliest crossing at or beyond the search start wins.
      for (const double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
        if (t >= t_lo && t <= 1.0) {
          return {a.x + t * u.x, a.y + t * u.y};
        }
      }
    }
  }
  return points_.back();
}

}  // namespace svt
