#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/random.hpp"

namespace cq {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}
inline double distance(Point a, Point b) noexcept { return std::sqrt(squared_distance(a, b)); }

/// A drawing: one position per vertex.
using Layout = std::vector<Point>;

struct BoundingBox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }
  double diagonal() const noexcept { return std::hypot(width(), height()); }
  double longer_side() const noexcept { return std::max(width(), height()); }
};

inline BoundingBox bounding_box(std::span<const Point> pts) {
  if (pts.empty()) return {};
  BoundingBox b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Point& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.max_x = std::max(b.max_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

/// Throws NumericError when a coordinate is not finite.
inline void require_finite(std::span<const Point> pts, const std::string& who) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
      throw NumericError(who + ": non-finite coordinate at vertex " + std::to_string(i));
}

/// Knobs shared by the iterative layouts. Algorithm-specific fields are
/// ignored by the algorithms that do not use them.
struct LayoutConfig {
  int max_iterations = 500;
  double convergence_tol = 1e-5;
  std::uint64_t seed = 1;

  /// Fruchterman-Reingold: initial temperature as a fraction of the frame
  /// width; cooled linearly to zero.
  double fr_initial_temperature = 0.1;
  /// Stress: w_ij = d_ij^exponent.
  double stress_weight_exponent = -2.0;
  /// Stress: start from classical MDS (true) or from random positions.
  bool stress_init_classical = true;
  /// LinLog: first gradient step, as a fraction of the mean edge length.
  double linlog_initial_step = 0.1;

  void validate() const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (!(convergence_tol > 0.0)) throw InvalidArgument("convergence_tol must be > 0");
  }
};

/// Uniform i.i.d. positions in the unit square.
inline Layout layout_random(const Graph& g, Rng& rng) {
  Layout pos(g.vertex_count());
  for (Point& p : pos) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
  }
  return pos;
}

inline Point centroid(std::span<const Point> pts) {
  Point c;
  for (const Point& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  if (!pts.empty()) {
    c.x /= static_cast<double>(pts.size());
    c.y /= static_cast<double>(pts.size());
  }
  return c;
}

}  // namespace cq
