#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cq/error.hpp"

namespace cq {

using Vertex = std::uint32_t;
using ClusterId = std::uint32_t;

/// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices 0..n-1. Immutable after construction;
/// adjacency is kept in CSR form for the layout and BFS inner loops.
class Graph {
public:
  Graph() = default;

  /// Throws InvalidArgument on a self-loop, a duplicate edge or an endpoint
  /// outside 0..n-1.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u == e.v)
        throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
      if (e.v >= n_)
        throw InvalidArgument("edge endpoint " + std::to_string(e.v) +
                              " out of range for n=" + std::to_string(n_));
      if (i > 0 && edges_[i - 1] == e)
        throw InvalidArgument("duplicate edge {" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + "}");
    }
    offsets_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      adjacency_[fill[e.u]++] = e.v;
      adjacency_[fill[e.v]++] = e.u;
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex a, Vertex b) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
  }

private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
};

/// Non-overlapping partition of 0..n-1 into clusters 0..k-1, each non-empty.
class ClusterLabeling {
public:
  ClusterLabeling() = default;

  explicit ClusterLabeling(std::vector<ClusterId> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) return;
    k_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
    std::vector<bool> used(k_, false);
    for (ClusterId c : labels_) used[c] = true;
    for (std::size_t c = 0; c < k_; ++c)
      if (!used[c])
        throw InvalidArgument("cluster id " + std::to_string(c) +
                              " unused; ids must be dense 0..k-1");
  }

  /// Accepts arbitrary integer ids and renumbers them densely in increasing
  /// order of the original id.
  static ClusterLabeling from_raw(std::span<const std::int64_t> raw) {
    std::vector<std::int64_t> ids(raw.begin(), raw.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<ClusterId> labels(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      labels[i] = static_cast<ClusterId>(
          std::lower_bound(ids.begin(), ids.end(), raw[i]) - ids.begin());
    return ClusterLabeling(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t cluster_count() const noexcept { return k_; }
  ClusterId operator[](std::size_t v) const { return labels_[v]; }
  std::span<const ClusterId> labels() const noexcept { return labels_; }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (ClusterId c : labels_) ++sizes[c];
    return sizes;
  }

  friend bool operator==(const ClusterLabeling&, const ClusterLabeling&) = default;

private:
  std::vector<ClusterId> labels_;
  std::size_t k_ = 0;
};

/// Dense symmetric matrix of hop distances.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }

private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// 2|E| / (n(n-1)).
inline double density(const Graph& g) {
  const double n = static_cast<double>(g.vertex_count());
  if (g.vertex_count() < 2) throw InvalidArgument("density needs at least 2 vertices");
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

/// Per-cluster internal edge counts.
inline std::vector<std::size_t> internal_edge_counts(const Graph& g, const ClusterLabeling& c) {
  std::vector<std::size_t> counts(c.cluster_count(), 0);
  for (const Edge& e : g.edges())
    if (c[e.u] == c[e.v]) ++counts[c[e.u]];
  return counts;
}

/// Mean over clusters of internal edges / within-cluster pairs.
inline double avg_cluster_density(const Graph& g, const ClusterLabeling& c) {
  if (c.size() != g.vertex_count())
    throw InvalidArgument("labeling covers " + std::to_string(c.size()) +
                          " vertices, graph has " + std::to_string(g.vertex_count()));
  const auto sizes = c.cluster_sizes();
  const auto internal = internal_edge_counts(g, c);
  double sum = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2)
      throw InvalidArgument("cluster " + std::to_string(i) +
                            " is a singleton; its density is undefined");
    const double pairs = 0.5 * static_cast<double>(sizes[i]) * static_cast<double>(sizes[i] - 1);
    sum += static_cast<double>(internal[i]) / pairs;
  }
  return sum / static_cast<double>(sizes.size());
}

/// Component id per vertex, ids assigned in order of the smallest vertex.
struct Components {
  std::vector<std::uint32_t> component;
  std::size_t count = 0;
};

inline Components connected_components(const Graph& g) {
  constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
  Components out{std::vector<std::uint32_t>(g.vertex_count(), unseen), 0};
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (out.component[s] != unseen) continue;
    const auto id = static_cast<std::uint32_t>(out.count++);
    out.component[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (out.component[w] == unseen) {
          out.component[w] = id;
          stack.push_back(w);
        }
    }
  }
  return out;
}

inline bool is_connected(const Graph& g) {
  return g.vertex_count() <= 1 || connected_components(g).count == 1;
}

/// Subgraph induced by `keep` (sorted, unique). Vertex keep[i] becomes i.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<std::int64_t> index(g.vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (index[e.u] >= 0 && index[e.v] >= 0)
      edges.emplace_back(static_cast<Vertex>(index[e.u]), static_cast<Vertex>(index[e.v]));
  return Graph(keep.size(), std::move(edges));
}

/// Vertices of the largest connected component (ties: lowest component id),
/// ascending.
inline std::vector<Vertex> largest_component_vertices(const Graph& g) {
  const Components cc = connected_components(g);
  std::vector<std::size_t> sizes(cc.count, 0);
  for (auto c : cc.component) ++sizes[c];
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (cc.component[v] == best) keep.push_back(v);
  return keep;
}

/// Unweighted all-pairs shortest paths by one BFS per source.
inline DistanceMatrix bfs_all_pairs(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 1) {
    const auto cc = connected_components(g);
    if (cc.count != 1)
      throw InvalidArgument("graph is disconnected (" + std::to_string(cc.count) +
                            " components); distances undefined");
  }
  DistanceMatrix d(n);
  std::vector<std::int64_t> dist(n);
  std::vector<Vertex> queue(n);
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    dist[s] = 0;
    while (head < tail) {
      Vertex v = queue[head++];
      for (Vertex w : g.neighbors(v))
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
    }
    for (std::size_t t = 0; t < n; ++t) d(s, t) = static_cast<double>(dist[t]);
  }
  return d;
}

}  // namespace cq
