#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/layout.hpp"
#include "cq/random.hpp"

namespace cq {

/// Fruchterman-Reingold in the unit frame: ideal edge length k = sqrt(1/n),
/// repulsion k^2/d between all pairs, attraction d^2/k along edges, moves
/// capped by a temperature that cools linearly to zero. Positions are not
/// clamped to the frame.
inline Layout layout_fr(const Graph& g, const LayoutConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = g.vertex_count();
  Layout pos = layout_random(g, rng);
  if (n < 2) return pos;

  const double k = std::sqrt(1.0 / static_cast<double>(n));
  const double k2 = k * k;
  const double t0 = cfg.fr_initial_temperature;
  std::vector<Point> disp(n);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-24 * k2) {
          // Coincident: push apart in a random direction.
          dx = (uniform01(rng) - 0.5) * 1e-6 * k;
          dy = (uniform01(rng) - 0.5) * 1e-6 * k;
          d2 = dx * dx + dy * dy;
        }
        const double f = k2 / d2;  // (k^2/d) / d, times the unnormalized delta
        disp[i].x += dx * f;
        disp[i].y += dy * f;
        disp[j].x -= dx * f;
        disp[j].y -= dy * f;
      }
    }
    for (const Edge& e : g.edges()) {
      const double dx = pos[e.u].x - pos[e.v].x, dy = pos[e.u].y - pos[e.v].y;
      const double f = std::sqrt(dx * dx + dy * dy) / k;  // (d^2/k) / d
      disp[e.u].x -= dx * f;
      disp[e.u].y -= dy * f;
      disp[e.v].x += dx * f;
      disp[e.v].y += dy * f;
    }

    const double temperature =
        t0 * (1.0 - static_cast<double>(it) / static_cast<double>(cfg.max_iterations));
    double max_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::hypot(disp[i].x, disp[i].y);
      if (len <= 0.0) continue;
      const double step = std::min(len, temperature);
      pos[i].x += disp[i].x / len * step;
      pos[i].y += disp[i].y / len * step;
      max_move = std::max(max_move, step);
    }
    if (max_move < cfg.convergence_tol * k) break;
  }
  require_finite(pos, "fruchterman-reingold");
  return pos;
}

/// Node-repulsion LinLog energy: sum over edges of distance minus sum over all
/// pairs of log distance. +inf when two vertices coincide.
inline double linlog_energy(const Graph& g, std::span<const Point> pos) {
  double attraction = 0.0, repulsion = 0.0;
  for (const Edge& e : g.edges()) attraction += distance(pos[e.u], pos[e.v]);
  const std::size_t n = pos.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(pos[i], pos[j]);
      if (d2 <= 0.0) return std::numeric_limits<double>::infinity();
      repulsion += 0.5 * std::log(d2);
    }
  return attraction - repulsion;
}

namespace detail {

inline void linlog_gradient(const Graph& g, std::span<const Point> pos, std::vector<Point>& grad) {
  const std::size_t n = pos.size();
  std::fill(grad.begin(), grad.end(), Point{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
      const double inv = 1.0 / (dx * dx + dy * dy);
      grad[i].x -= dx * inv;
      grad[i].y -= dy * inv;
      grad[j].x += dx * inv;
      grad[j].y += dy * inv;
    }
  for (const Edge& e : g.edges()) {
    const double dx = pos[e.u].x - pos[e.v].x, dy = pos[e.u].y - pos[e.v].y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d == 0.0) continue;
    grad[e.u].x += dx / d;
    grad[e.u].y += dy / d;
    grad[e.v].x -= dx / d;
    grad[e.v].y -= dy / d;
  }
}

}  // namespace detail

struct LinLogResult {
  Layout layout;
  std::vector<double> energy;  // after each accepted step, starting with the initial energy
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent on the LinLog energy with Armijo backtracking. The step
/// grows by 1.5x after every accepted step and halves on rejection.
/// Starts from layout_random rescaled to the energy-optimal scale.
inline LinLogResult linlog_descent(const Graph& g, const LayoutConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!is_connected(g)) throw InvalidArgument("linlog layout needs a connected graph");
  const std::size_t n = g.vertex_count();
  LinLogResult out;
  out.layout = layout_random(g, rng);
  if (n < 2) return out;
  Layout& pos = out.layout;

  // U(sX) = s*A - P*ln(s) + const is minimised at s = P/A.
  double attraction = 0.0;
  for (const Edge& e : g.edges()) attraction += distance(pos[e.u], pos[e.v]);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double s = pairs / attraction;
  for (Point& p : pos) {
    p.x *= s;
    p.y *= s;
  }

  double energy = linlog_energy(g, pos);
  if (!std::isfinite(energy)) throw NumericError("linlog: initial energy is not finite");
  out.energy.push_back(energy);

  std::vector<Point> grad(n);
  Layout trial(n);
  detail::linlog_gradient(g, pos, grad);
  double max_grad = 0.0;
  for (const Point& p : grad) max_grad = std::max(max_grad, std::hypot(p.x, p.y));
  double mean_edge = attraction * s / static_cast<double>(std::max<std::size_t>(1, g.edge_count()));
  double step = max_grad > 0 ? cfg.linlog_initial_step * mean_edge / max_grad : 1.0;

  constexpr double armijo = 1e-4;
  constexpr int max_halvings = 60;
  int quiet = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    double grad_sq = 0.0;
    for (const Point& p : grad) grad_sq += p.x * p.x + p.y * p.y;
    if (grad_sq == 0.0) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    double trial_energy = energy;
    for (int h = 0; h < max_halvings; ++h) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = {pos[i].x - step * grad[i].x, pos[i].y - step * grad[i].y};
      trial_energy = linlog_energy(g, trial);
      if (std::isfinite(trial_energy) && trial_energy <= energy - armijo * step * grad_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) {
      // No descent even for a vanishing step: a numerical stationary point.
      out.converged = true;
      break;
    }
    const double decrease = energy - trial_energy;
    std::swap(pos, trial);
    energy = trial_energy;
    out.energy.push_back(energy);
    step *= 1.5;
    detail::linlog_gradient(g, pos, grad);

    quiet = decrease <= cfg.convergence_tol * std::max(1.0, std::abs(energy)) ? quiet + 1 : 0;
    if (quiet >= 10) {
      out.converged = true;
      break;
    }
  }
  require_finite(pos, "linlog");
  return out;
}

inline Layout layout_linlog(const Graph& g, const LayoutConfig& cfg, Rng& rng) {
  return linlog_descent(g, cfg, rng).layout;
}

}  // namespace cq
