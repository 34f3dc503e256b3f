#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cq/detail/linalg.hpp"
#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/layouts/stress.hpp"

namespace cq {

struct SpectralResult {
  Layout layout;
  /// Laplacian eigenvalues for the 2nd, 3rd and (when n > 3) 4th smallest.
  std::vector<double> eigenvalues;
  bool converged = false;
  /// lambda_3 is (numerically) repeated, so the second axis is one arbitrary
  /// member of a multi-dimensional eigenspace.
  bool degenerate = false;
};

/// Eigenvectors of L = D - A for the 2nd and 3rd smallest eigenvalues, by
/// orthogonal iteration on cI - L (c = 2 * max degree + 1 keeps it positive definite) in
/// the complement of the all-ones vector. A third guard vector is iterated
/// to speed convergence and detect a repeated lambda_3.
inline SpectralResult spectral_layout(const Graph& g) {
  using detail::Vec;
  const std::size_t n = g.vertex_count();
  SpectralResult out;
  out.layout.assign(n, Point{});
  if (n < 2) {
    out.converged = true;
    return out;
  }
  if (!is_connected(g)) throw InvalidArgument("spectral layout needs a connected graph");

  std::size_t max_degree = 0;
  for (Vertex v = 0; v < n; ++v) max_degree = std::max(max_degree, g.degree(v));
  const double c = 2.0 * static_cast<double>(max_degree) + 1.0;

  auto apply = [&](std::span<const double> x, std::span<double> y) {
    for (Vertex v = 0; v < n; ++v) {
      double s = (c - static_cast<double>(g.degree(v))) * x[v];
      for (Vertex w : g.neighbors(v)) s += x[w];
      y[v] = s;
    }
  };

  const std::vector<Vec> ones{Vec(n, 1.0 / std::sqrt(static_cast<double>(n)))};
  const std::size_t p = std::min<std::size_t>(3, n - 1);
  auto sub = detail::subspace_iteration(n, p, apply, ones, kEigenTolerance, eigen_iteration_cap(n));

  out.converged = sub.converged;
  for (double mu : sub.values) out.eigenvalues.push_back(c - mu);
  for (Vertex v = 0; v < n; ++v) {
    out.layout[v].x = sub.vectors[0][v];
    out.layout[v].y = p > 1 ? sub.vectors[1][v] : 0.0;
  }
  if (p > 2) {
    const double l3 = out.eigenvalues[1], l4 = out.eigenvalues[2];
    out.degenerate = std::abs(l4 - l3) <= 1e-6 * std::max(1.0, std::abs(l4));
  }
  return out;
}

inline Layout layout_spectral(const Graph& g, const LayoutConfig& cfg) {
  cfg.validate();
  return spectral_layout(g).layout;
}

}  // namespace cq
