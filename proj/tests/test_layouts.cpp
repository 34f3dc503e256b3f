#include <gtest/gtest.h>

#include <cmath>

#include "cq/layouts.hpp"

using namespace cq;

namespace {

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, static_cast<Vertex>((v + 1) % n));
  return Graph(n, e);
}

/// Two cliques of size s joined by the edge (s-1, s).
Graph barbell(std::size_t s) {
  std::vector<Edge> e;
  for (std::size_t off : {std::size_t{0}, s})
    for (Vertex u = 0; u < s; ++u)
      for (Vertex v = u + 1; v < s; ++v) e.emplace_back(off + u, off + v);
  e.emplace_back(s - 1, s);
  return Graph(2 * s, e);
}

void expect_clusters_tighter(const Layout& pos, std::size_t s) {
  double intra = 0.0, inter = 0.0;
  std::size_t ni = 0, nx = 0;
  for (std::size_t i = 0; i < 2 * s; ++i)
    for (std::size_t j = i + 1; j < 2 * s; ++j) {
      if ((i < s) == (j < s)) intra += distance(pos[i], pos[j]), ++ni;
      else inter += distance(pos[i], pos[j]), ++nx;
    }
  EXPECT_LT(intra / ni, inter / nx);
}

bool same_layout(const Layout& a, const Layout& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
  return true;
}

}  // namespace

TEST(Random, UnitSquareAndDeterministic) {
  LayoutConfig cfg;
  cfg.seed = 4;
  auto a = compute_layout(Algorithm::random, path(50), cfg);
  for (const Point& p : a) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LT(p.x, 1.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LT(p.y, 1.0);
  }
  EXPECT_TRUE(same_layout(a, compute_layout(Algorithm::random, path(50), cfg)));
  EXPECT_EQ(compute_layout(Algorithm::random, Graph(1, {}), cfg).size(), 1u);
}

TEST(FruchtermanReingold, EdgeSettlesAtIdealLength) {
  LayoutConfig cfg;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    cfg.seed = s;
    auto pos = compute_layout(Algorithm::fr, complete(2), cfg);
    EXPECT_NEAR(distance(pos[0], pos[1]) / std::sqrt(0.5), 1.0, 0.2);
  }
}

TEST(FruchtermanReingold, SeparatesTwoCliques) {
  LayoutConfig cfg;
  cfg.seed = 3;
  expect_clusters_tighter(compute_layout(Algorithm::fr, barbell(3), cfg), 3);
  expect_clusters_tighter(compute_layout(Algorithm::fr, barbell(8), cfg), 8);
}

TEST(LinLog, EdgeSettlesAtUnitLength) {
  LayoutConfig cfg;
  cfg.max_iterations = 2000;
  auto pos = compute_layout(Algorithm::linlog, complete(2), cfg);
  EXPECT_NEAR(distance(pos[0], pos[1]), 1.0, 1e-3);
}

TEST(LinLog, EnergyDecreasesAndSeparatesCliques) {
  LayoutConfig cfg;
  cfg.seed = 8;
  Rng rng(cfg.seed);
  auto res = linlog_descent(barbell(6), cfg, rng);
  ASSERT_GE(res.energy.size(), 2u);
  for (std::size_t i = 1; i < res.energy.size(); ++i) EXPECT_LE(res.energy[i], res.energy[i - 1]);
  EXPECT_NEAR(res.energy.back(), linlog_energy(barbell(6), res.layout), 1e-9 * std::abs(res.energy.back()) + 1e-9);
  expect_clusters_tighter(res.layout, 6);
  EXPECT_THROW(compute_layout(Algorithm::linlog, Graph(3, {{0, 1}}), cfg), InvalidArgument);
}

TEST(Stress, PathIsCollinear) {
  LayoutConfig cfg;
  auto pos = compute_layout(Algorithm::stress, path(3), cfg);
  const double a = distance(pos[0], pos[1]), b = distance(pos[1], pos[2]), c = distance(pos[0], pos[2]);
  EXPECT_NEAR(a / b, 1.0, 1e-4);
  EXPECT_NEAR(c / a, 2.0, 1e-4);
}

TEST(Stress, TriangleIsEquilateral) {
  LayoutConfig cfg;
  auto pos = compute_layout(Algorithm::stress, complete(3), cfg);
  EXPECT_NEAR(distance(pos[0], pos[1]), 1.0, 1e-6);
  EXPECT_NEAR(distance(pos[1], pos[2]), 1.0, 1e-6);
  EXPECT_NEAR(distance(pos[0], pos[2]), 1.0, 1e-6);
}

TEST(Stress, MonotoneFromRandomStart) {
  Rng shape(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Edge> e;
    const std::size_t n = 20 + trial * 7;
    for (Vertex v = 1; v < n; ++v) e.emplace_back(static_cast<Vertex>(uniform_index(shape, v)), v);
    Graph g(n, e);
    LayoutConfig cfg;
    cfg.stress_init_classical = trial % 2 == 0;
    cfg.seed = static_cast<std::uint64_t>(trial);
    Rng rng(cfg.seed);
    auto res = stress_majorization(g, bfs_all_pairs(g), cfg, rng);
    ASSERT_GE(res.stress.size(), 2u);
    for (std::size_t i = 1; i < res.stress.size(); ++i)
      EXPECT_LE(res.stress[i], res.stress[i - 1] * (1 + 1e-12)) << "trial " << trial << " step " << i;
  }
}

TEST(ClassicalMds, PathAndTriangle) {
  LayoutConfig cfg;
  auto p = compute_layout(Algorithm::mds, path(3), cfg);
  EXPECT_NEAR(distance(p[0], p[1]), 1.0, 1e-6);
  EXPECT_NEAR(distance(p[1], p[2]), 1.0, 1e-6);
  EXPECT_NEAR(distance(p[0], p[2]), 2.0, 1e-6);
  auto t = compute_layout(Algorithm::mds, complete(3), cfg);
  EXPECT_NEAR(distance(t[0], t[1]), distance(t[1], t[2]), 1e-6);
  EXPECT_NEAR(distance(t[0], t[1]), distance(t[0], t[2]), 1e-6);
}

TEST(ClassicalMds, EigenvectorsOrthogonal) {
  auto res = classical_mds(bfs_all_pairs(cycle(12)));
  const auto& [u, v] = res.eigenvectors;
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  EXPECT_LT(std::abs(dot), 1e-8 * std::sqrt(nu * nv));
  EXPECT_GE(res.eigenvalues[0], res.eigenvalues[1] * (1 - 1e-9));
}

TEST(Spectral, PathEigenvalue) {
  auto res = spectral_layout(path(3));
  ASSERT_GE(res.eigenvalues.size(), 2u);
  EXPECT_NEAR(res.eigenvalues[0], 1.0, 1e-6);
  EXPECT_NEAR(res.eigenvalues[1], 3.0, 1e-6);
}

TEST(Spectral, CycleGivesSquare) {
  auto res = spectral_layout(cycle(4));
  const auto& p = res.layout;
  const double side = distance(p[0], p[1]);
  EXPECT_GT(side, 1e-3);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(distance(p[i], p[(i + 1) % 4]), side, 1e-6);
  EXPECT_NEAR(distance(p[0], p[2]), side * std::sqrt(2.0), 1e-6);
}

TEST(Spectral, CoordinatesOrthogonalToOnes) {
  auto res = spectral_layout(barbell(7));
  double sx = 0.0, sy = 0.0;
  for (const Point& q : res.layout) sx += q.x, sy += q.y;
  EXPECT_LT(std::abs(sx), 1e-8);
  EXPECT_LT(std::abs(sy), 1e-8);
  EXPECT_TRUE(res.converged);
  // Cycles pair lambda_2 = lambda_3, which still fixes the plane; a star
  // repeats lambda_3 = lambda_4.
  EXPECT_FALSE(spectral_layout(cycle(10)).degenerate);
  std::vector<Edge> spokes;
  for (Vertex v = 1; v < 5; ++v) spokes.emplace_back(0, v);
  EXPECT_TRUE(spectral_layout(Graph(5, spokes)).degenerate);
}

TEST(AllAlgorithms, FiniteAndDeterministic) {
  Graph g = barbell(10);
  for (Algorithm a : kBuiltinAlgorithms) {
    LayoutConfig cfg;
    cfg.seed = 21;
    auto first = compute_layout(a, g, cfg);
    ASSERT_EQ(first.size(), g.vertex_count());
    EXPECT_NO_THROW(require_finite(first, "test"));
    EXPECT_TRUE(same_layout(first, compute_layout(a, g, cfg))) << to_string(a);
  }
  EXPECT_EQ(parse_algorithm("linlog"), Algorithm::linlog);
  EXPECT_THROW(parse_algorithm("tsnet"), InvalidArgument);
}
