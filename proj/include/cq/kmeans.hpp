#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/random.hpp"

namespace cq {

struct KMeansConfig {
  std::size_t k = 2;
  int restarts = 10;
  int max_iterations = 300;
  /// Centroid-movement threshold relative to the bounding-box diagonal.
  double tol = 1e-6;
  std::uint64_t seed = 1;

  void validate() const {
    if (k < 1) throw InvalidArgument("k-means needs k >= 1");
    if (restarts < 1) throw InvalidArgument("k-means needs restarts >= 1");
    if (max_iterations < 1) throw InvalidArgument("k-means needs max_iterations >= 1");
    if (!(tol >= 0.0)) throw InvalidArgument("k-means tol must be >= 0");
  }
};

inline std::size_t count_distinct(std::span<const Point> pts) {
  std::vector<std::pair<double, double>> v;
  v.reserve(pts.size());
  for (const Point& p : pts) v.emplace_back(p.x, p.y);
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

/// k-means++ seeding: first centre uniform, each further centre drawn with
/// probability proportional to the squared distance to its nearest chosen
/// centre.
inline std::vector<Point> kmeanspp_seed(std::span<const Point> pts, std::size_t k, Rng& rng) {
  if (k < 1) throw InvalidArgument("k-means++ needs k >= 1");
  if (k > count_distinct(pts))
    throw InvalidArgument("k-means++: k=" + std::to_string(k) + " exceeds the number of distinct points");
  const std::size_t n = pts.size();
  std::vector<Point> centres;
  centres.push_back(pts[uniform_index(rng, n)]);
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(pts[i], centres[0]);
  while (centres.size() < k) {
    double total = 0.0;
    for (double w : nearest) total += w;
    const double r = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      acc += nearest[i];
      pick = i;
      if (acc > r) break;
    }
    centres.push_back(pts[pick]);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_distance(pts[i], centres.back()));
  }
  return centres;
}

struct KMeansResult {
  ClusterLabeling labels;
  double objective = 0.0;
  std::vector<Point> centroids;
  /// Objective after every centroid update of the winning run.
  std::vector<double> history;
  int iterations = 0;
  int best_restart = 0;
};

namespace detail {

/// Nearest centroid per point; ties go to the lower index.
inline void assign_nearest(std::span<const Point> pts, std::span<const Point> centres,
                           std::vector<ClusterId>& labels) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    ClusterId arg = 0;
    for (std::size_t c = 0; c < centres.size(); ++c) {
      const double d = squared_distance(pts[i], centres[c]);
      if (d < best) {
        best = d;
        arg = static_cast<ClusterId>(c);
      }
    }
    labels[i] = arg;
  }
}

/// Gives every empty cluster the point farthest from its own centroid,
/// taken from a cluster that has at least two members.
inline void repair_empty(std::span<const Point> pts, std::vector<Point>& centres, std::vector<ClusterId>& labels) {
  std::vector<std::size_t> sizes(centres.size(), 0);
  for (ClusterId c : labels) ++sizes[c];
  for (std::size_t empty = 0; empty < centres.size(); ++empty) {
    if (sizes[empty] != 0) continue;
    double far = -1.0;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double d = squared_distance(pts[i], centres[labels[i]]);
      if (d > far) {
        far = d;
        pick = i;
      }
    }
    --sizes[labels[pick]];
    labels[pick] = static_cast<ClusterId>(empty);
    ++sizes[empty];
    centres[empty] = pts[pick];
  }
}

inline std::vector<Point> cluster_means(std::span<const Point> pts, std::span<const ClusterId> labels, std::size_t k) {
  std::vector<Point> sum(k);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sum[labels[i]].x += pts[i].x;
    sum[labels[i]].y += pts[i].y;
    ++count[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    sum[c].x /= static_cast<double>(count[c]);
    sum[c].y /= static_cast<double>(count[c]);
  }
  return sum;
}

inline double objective(std::span<const Point> pts, std::span<const ClusterId> labels, std::span<const Point> centres) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += squared_distance(pts[i], centres[labels[i]]);
  return s;
}

struct LloydRun {
  std::vector<ClusterId> labels;
  std::vector<Point> centres;
  std::vector<double> history;
  double objective = 0.0;
  int iterations = 0;
};

inline LloydRun lloyd(std::span<const Point> pts, std::vector<Point> centres, int max_iterations, double move_tol) {
  const std::size_t k = centres.size();
  LloydRun run;
  run.labels.resize(pts.size());
  assign_nearest(pts, centres, run.labels);
  repair_empty(pts, centres, run.labels);
  std::vector<ClusterId> next(pts.size());
  bool settled = false;
  for (int it = 1; it <= max_iterations; ++it) {
    auto updated = cluster_means(pts, run.labels, k);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, distance(updated[c], centres[c]));
    centres = std::move(updated);
    run.history.push_back(objective(pts, run.labels, centres));
    run.iterations = it;

    assign_nearest(pts, centres, next);
    repair_empty(pts, centres, next);
    if (next == run.labels) {
      settled = true;
      break;
    }
    run.labels.swap(next);
    if (shift <= move_tol) break;
  }
  if (!settled) {
    // Labels moved after the last update: bring centroids in line with them.
    centres = cluster_means(pts, run.labels, k);
    run.history.push_back(objective(pts, run.labels, centres));
  }
  run.centres = std::move(centres);
  run.objective = run.history.back();
  return run;
}

}  // namespace detail

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` runs. Restart r
/// uses its own engine seeded from (seed, r), so runs are independent of
/// each other and of evaluation order.
inline KMeansResult kmeans(std::span<const Point> pts, const KMeansConfig& cfg) {
  cfg.validate();
  if (pts.size() < cfg.k)
    throw InvalidArgument("k-means: " + std::to_string(pts.size()) + " points for k=" + std::to_string(cfg.k));
  require_finite(pts, "k-means");
  const double move_tol = cfg.tol * bounding_box(pts).diagonal();

  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(r)}));
    auto run = detail::lloyd(pts, kmeanspp_seed(pts, cfg.k, rng), cfg.max_iterations, move_tol);
    if (run.objective < best.objective) {
      best.labels = ClusterLabeling(std::move(run.labels));
      best.objective = run.objective;
      best.centroids = std::move(run.centres);
      best.history = std::move(run.history);
      best.iterations = run.iterations;
      best.best_restart = r;
    }
  }
  return best;
}

}  // namespace cq
