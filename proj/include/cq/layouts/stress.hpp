#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cq/detail/linalg.hpp"
#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/random.hpp"

namespace cq {

struct ClassicalMdsResult {
  Layout layout;
  std::array<double, 2> eigenvalues{};
  std::array<detail::Vec, 2> eigenvectors;
  bool converged = false;
};

/// Eigenpair solver settings shared by the classical-scaling and spectral
/// layouts.
inline int eigen_iteration_cap(std::size_t n) { return std::max<int>(100, 10 * static_cast<int>(n)); }
inline constexpr double kEigenTolerance = 1e-9;

/// Classical (Torgerson) scaling: B = -1/2 J D^2 J, top two eigenpairs by
/// power iteration with deflation, coordinates = eigenvector * sqrt(eigenvalue).
/// B may have negative eigenvalues for non-Euclidean D, so the iteration runs
/// on B + sI with s covering the most negative eigenvalue.
inline ClassicalMdsResult classical_mds(const DistanceMatrix& d) {
  using detail::Vec;
  const std::size_t n = d.size();
  ClassicalMdsResult out;
  out.layout.assign(n, Point{});
  if (n < 2) {
    out.converged = true;
    return out;
  }

  Vec b(n * n), row_mean(n, 0.0);
  double all_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += d(i, j) * d(i, j);
    all_mean += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  all_mean /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b[i * n + j] = -0.5 * (d(i, j) * d(i, j) - row_mean[i] - row_mean[j] + all_mean);

  auto apply = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* r = b.data() + i * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += r[j] * x[j];
      y[i] = s;
    }
  };

  // The all-ones vector is a null vector of B by construction.
  std::vector<Vec> found{Vec(n, 1.0 / std::sqrt(static_cast<double>(n)))};
  const int cap = eigen_iteration_cap(n);

  // Estimate the most negative eigenvalue to pick the shift.
  auto dominant = detail::power_iteration(n, apply, 0.0, found, detail::start_vector(n, 1), 1e-6, 200);
  double lowest = dominant.value;
  if (dominant.value > 0.0) {
    auto low = detail::power_iteration(n, apply, -dominant.value, found, detail::start_vector(n, 2), 1e-6, 200);
    lowest = low.value;
  }
  const double shift = lowest < 0.0 ? 1.05 * -lowest : 0.0;

  out.converged = true;
  for (std::size_t axis = 0; axis < 2; ++axis) {
    if (found.size() >= n) break;  // nothing left (n == 2 has rank 1)
    auto pair = detail::power_iteration(n, apply, shift, found, detail::start_vector(n, 10 + axis),
                                        kEigenTolerance, cap);
    if (axis == 0 && !(pair.value > 0.0))
      throw NumericError("classical MDS: top eigenvalue is not positive (degenerate distances)");
    out.converged = out.converged && pair.converged;
    out.eigenvalues[axis] = pair.value;
    const double len = std::sqrt(std::max(pair.value, 0.0));
    for (std::size_t i = 0; i < n; ++i) (axis == 0 ? out.layout[i].x : out.layout[i].y) = pair.vector[i] * len;
    out.eigenvectors[axis] = pair.vector;
    found.push_back(std::move(pair.vector));
  }
  return out;
}

inline Layout layout_classical_mds(const Graph& g, const DistanceMatrix& d, const LayoutConfig& cfg) {
  cfg.validate();
  if (d.size() != g.vertex_count()) throw InvalidArgument("distance matrix does not match graph");
  return classical_mds(d).layout;
}

/// Weighted stress sum_{i<j} w_ij (|x_i - x_j| - d_ij)^2.
inline double layout_stress_value(std::span<const Point> pos, const DistanceMatrix& d, double weight_exponent) {
  double s = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const double dij = d(i, j);
      const double r = distance(pos[i], pos[j]) - dij;
      s += std::pow(dij, weight_exponent) * r * r;
    }
  return s;
}

struct StressResult {
  Layout layout;
  std::vector<double> stress;  // initial value, then one entry per Guttman step
  int iterations = 0;
  bool converged = false;
  bool jittered_midway = false;
};

/// SMACOF: X <- V^+ B(X) X with V the weighted Laplacian, solved exactly via
/// Cholesky of V with the last vertex pinned, then recentred. Stress is
/// monotone non-increasing. Stops when the relative decrease drops below
/// cfg.convergence_tol.
inline StressResult stress_majorization(const Graph& g, const DistanceMatrix& d, const LayoutConfig& cfg,
                                        Rng& rng) {
  cfg.validate();
  const std::size_t n = g.vertex_count();
  if (d.size() != n) throw InvalidArgument("distance matrix does not match graph");
  StressResult out;
  if (n < 2) {
    out.layout.assign(n, Point{});
    out.converged = true;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !(d(i, j) > 0.0))
        throw InvalidArgument("stress layout needs positive distances (connected graph)");

  const double expo = cfg.stress_weight_exponent;
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) w[i * n + j] = std::pow(d(i, j), expo);

  const std::size_t m = n - 1;
  detail::Vec v(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) diag += w[i * n + j];
    for (std::size_t j = 0; j < m; ++j) v[i * m + j] = i == j ? diag : -w[i * n + j];
  }
  const detail::Cholesky chol(std::move(v), m);

  Layout& pos = out.layout;
  pos = cfg.stress_init_classical ? classical_mds(d).layout : layout_random(g, rng);
  auto jitter = [&](std::size_t i) {
    const double scale = std::max(1e-9, bounding_box(pos).diagonal()) * 1e-6;
    pos[i].x += (uniform01(rng) - 0.5) * scale;
    pos[i].y += (uniform01(rng) - 0.5) * scale;
  };
  // Vertices with identical distance rows start coincident under classical
  // scaling and would never separate.
  for (std::size_t i = 0; i < n; ++i) jitter(i);

  double current = layout_stress_value(pos, d, expo);
  out.stress.push_back(current);
  detail::Vec bx(n), by(n);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    bool coincident = false;
    for (std::size_t i = 0; i < n; ++i) {
      double sx = 0.0, sy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist == 0.0) {
          coincident = true;
          continue;
        }
        const double c = w[i * n + j] * d(i, j) / dist;
        sx += c * dx;
        sy += c * dy;
      }
      bx[i] = sx;
      by[i] = sy;
    }
    if (coincident) {
      for (std::size_t i = 0; i < n; ++i) jitter(i);
      current = layout_stress_value(pos, d, expo);
      out.jittered_midway = true;
      continue;
    }
    chol.solve(std::span<double>(bx.data(), m));
    chol.solve(std::span<double>(by.data(), m));
    bx[m] = 0.0;
    by[m] = 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += bx[i];
      my += by[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = {bx[i] - mx, by[i] - my};

    const double next = layout_stress_value(pos, d, expo);
    out.stress.push_back(next);
    out.iterations = it + 1;
    const double rel = current > 0.0 ? (current - next) / current : 0.0;
    current = next;
    if (current == 0.0 || rel < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  require_finite(pos, "stress majorization");
  return out;
}

inline Layout layout_stress(const Graph& g, const DistanceMatrix& d, const LayoutConfig& cfg, Rng& rng) {
  return stress_majorization(g, d, cfg, rng).layout;
}

}  // namespace cq
