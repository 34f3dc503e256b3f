#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/random.hpp"

// Synthetic clustered graphs: a small base graph is expanded so that every
// base vertex becomes a cluster and every base edge becomes a random set of
// edges between the two clusters it joins.

namespace cq {

enum class BaseKind { complete, bipartite, star, tree, path, regular, gnm, complete_variable };

inline std::string_view to_string(BaseKind k) {
  switch (k) {
    case BaseKind::complete: return "complete";
    case BaseKind::bipartite: return "bipartite";
    case BaseKind::star: return "star";
    case BaseKind::tree: return "tree";
    case BaseKind::path: return "path";
    case BaseKind::regular: return "regular";
    case BaseKind::gnm: return "gnm";
    case BaseKind::complete_variable: return "complete-variable";
  }
  return "?";
}

inline BaseKind parse_base_kind(std::string_view s) {
  for (BaseKind k : {BaseKind::complete, BaseKind::bipartite, BaseKind::star, BaseKind::tree,
                     BaseKind::path, BaseKind::regular, BaseKind::gnm, BaseKind::complete_variable})
    if (s == to_string(k)) return k;
  throw InvalidArgument("unknown base kind '" + std::string(s) + "'");
}

struct GeneratorSpec {
  BaseKind base = BaseKind::complete;
  std::size_t cluster_count = 9;
  /// Equal bounds mean fixed-size clusters; otherwise sizes are drawn
  /// uniformly from [min, max].
  std::size_t cluster_size_min = 30;
  std::size_t cluster_size_max = 30;
  double internal_density = 0.4;
  double external_density = 0.01;
  std::size_t regular_degree = 3;  // regular
  std::size_t base_edges = 0;      // gnm
  std::uint64_t seed = 1;
  /// Replaces the base-kind prefix in dataset_name (e.g. "w").
  std::string name_prefix;

  bool variable_sizes() const noexcept { return cluster_size_min != cluster_size_max; }

  void validate() const {
    if (cluster_count < 2) throw InvalidArgument("cluster_count must be >= 2");
    if (cluster_size_min < 2) throw InvalidArgument("cluster size must be >= 2");
    if (cluster_size_max < cluster_size_min)
      throw InvalidArgument("cluster size range is empty");
    if (!(internal_density > 0.0 && internal_density <= 1.0))
      throw InvalidArgument("internal density must be in (0,1]");
    if (!(external_density > 0.0 && external_density <= 1.0))
      throw InvalidArgument("external density must be in (0,1]");
  }
};

namespace detail {

inline std::size_t pair_count(std::size_t s) { return s * (s - 1) / 2; }

/// Inverse of the row-major enumeration of pairs (a<b) over s items.
inline std::pair<std::size_t, std::size_t> unrank_pair(std::size_t idx, std::size_t s) {
  std::size_t a = 0;
  std::size_t row = s - 1;
  while (idx >= row) {
    idx -= row;
    ++a;
    --row;
  }
  return {a, a + 1 + idx};
}

/// `count` distinct values from [0, universe), returned in selection order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t universe, std::size_t count,
                                                           Rng& rng) {
  std::vector<std::size_t> pool(universe);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, universe - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

inline std::vector<Edge> random_recursive_tree(std::size_t n, Rng& rng) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i)
    edges.emplace_back(order[i], order[uniform_index(rng, i)]);
  return edges;
}

inline std::optional<Graph> try_random_regular(std::size_t n, std::size_t r, Rng& rng) {
  std::vector<Vertex> stubs;
  for (Vertex v = 0; v < n; ++v) stubs.insert(stubs.end(), r, v);
  for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[uniform_index(rng, i)]);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (stubs[i] == stubs[i + 1]) return std::nullopt;
    edges.emplace_back(stubs[i], stubs[i + 1]);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) return std::nullopt;
  Graph g(n, std::move(edges));
  if (!is_connected(g)) return std::nullopt;
  return g;
}

constexpr int kMaxAttempts = 1000;

}  // namespace detail

/// Small connected base graph whose vertices become clusters.
/// `regular_degree` is used by `regular`, `base_edges` by `gnm`.
inline Graph generate_base(BaseKind kind, std::size_t count, Rng& rng,
                           std::size_t regular_degree = 3, std::size_t base_edges = 0) {
  if (count < 2) throw InvalidArgument("base graph needs at least 2 vertices");
  std::vector<Edge> edges;
  switch (kind) {
    case BaseKind::complete:
    case BaseKind::complete_variable:
      for (Vertex a = 0; a < count; ++a)
        for (Vertex b = a + 1; b < count; ++b) edges.emplace_back(a, b);
      break;
    case BaseKind::bipartite: {
      const std::size_t left = (count + 1) / 2;
      for (Vertex a = 0; a < left; ++a)
        for (Vertex b = static_cast<Vertex>(left); b < count; ++b) edges.emplace_back(a, b);
      break;
    }
    case BaseKind::star:
      for (Vertex b = 1; b < count; ++b) edges.emplace_back(0, b);
      break;
    case BaseKind::tree:
      edges = detail::random_recursive_tree(count, rng);
      break;
    case BaseKind::path:
      for (Vertex b = 1; b < count; ++b) edges.emplace_back(b - 1, b);
      break;
    case BaseKind::regular: {
      const std::size_t r = regular_degree;
      if (r < 1 || r >= count || (r * count) % 2 != 0)
        throw InvalidArgument(std::to_string(r) + "-regular graph on " + std::to_string(count) +
                              " vertices is infeasible");
      if (r == 1 && count > 2)
        throw InvalidArgument("a 1-regular graph on more than 2 vertices is disconnected");
      if (r == 2) {
        // The only connected 2-regular graph is a cycle.
        std::vector<Vertex> order(count);
        std::iota(order.begin(), order.end(), Vertex{0});
        for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
        for (std::size_t i = 0; i < count; ++i) edges.emplace_back(order[i], order[(i + 1) % count]);
        break;
      }
      for (int attempt = 0; attempt < detail::kMaxAttempts; ++attempt)
        if (auto g = detail::try_random_regular(count, r, rng)) return *g;
      throw InvalidArgument("no connected simple " + std::to_string(r) + "-regular graph found");
    }
    case BaseKind::gnm: {
      const std::size_t m = base_edges;
      if (m < count - 1 || m > detail::pair_count(count))
        throw InvalidArgument("G(n,m) base needs n-1 <= m <= n(n-1)/2");
      for (int attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
        edges.clear();
        for (auto idx : detail::sample_without_replacement(detail::pair_count(count), m, rng)) {
          auto [a, b] = detail::unrank_pair(idx, count);
          edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
        }
        Graph g(count, edges);
        if (is_connected(g)) return g;
      }
      throw InvalidArgument("no connected G(n,m) base found for m=" + std::to_string(m));
    }
  }
  return Graph(count, std::move(edges));
}

struct ClusteredGraph {
  Graph graph;
  ClusterLabeling labels;
};

/// Expands `base` into a clustered graph. Cluster i takes the contiguous
/// vertex block of its size. Each cluster receives exactly
/// round(internal_density * C(s,2)) edges, placed as a random spanning tree
/// plus uniformly chosen extra pairs, so clusters are connected and hit the
/// target density. Each base edge (i,j) receives round(external_density *
/// s_i * s_j) edges (at least one) chosen uniformly from the s_i x s_j pairs.
inline ClusteredGraph expand_clustered(const Graph& base, const GeneratorSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t k = base.vertex_count();
  if (k != spec.cluster_count)
    throw InvalidArgument("base graph has " + std::to_string(k) + " vertices, spec asks for " +
                          std::to_string(spec.cluster_count) + " clusters");
  if (!is_connected(base)) throw InvalidArgument("base graph must be connected");

  std::vector<std::size_t> sizes(k);
  for (auto& s : sizes)
    s = spec.variable_sizes()
            ? static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(spec.cluster_size_min),
                                                   static_cast<std::int64_t>(spec.cluster_size_max)))
            : spec.cluster_size_min;
  std::vector<std::size_t> first(k + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), first.begin() + 1);

  std::vector<Edge> edges;
  std::vector<ClusterId> labels(first[k]);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t s = sizes[c];
    const auto offset = static_cast<Vertex>(first[c]);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(first[c]),
              labels.begin() + static_cast<std::ptrdiff_t>(first[c + 1]), static_cast<ClusterId>(c));

    const std::size_t pairs = detail::pair_count(s);
    const double target = spec.internal_density * static_cast<double>(pairs);
    auto m = static_cast<std::size_t>(std::llround(target));
    if (m < s - 1) {
      if (static_cast<double>(s - 1) > 1.1 * target)
        throw InvalidArgument("internal density " + std::to_string(spec.internal_density) +
                              " is too low to keep a cluster of " + std::to_string(s) +
                              " vertices connected within 10% of target");
      m = s - 1;
    }

    auto tree = detail::random_recursive_tree(s, rng);
    std::vector<bool> used(pairs, false);
    auto rank = [s](std::size_t a, std::size_t b) { return a * (2 * s - a - 1) / 2 + (b - a - 1); };
    for (const Edge& e : tree) used[rank(e.u, e.v)] = true;
    std::vector<std::size_t> free_pairs;
    free_pairs.reserve(pairs - tree.size());
    for (std::size_t i = 0; i < pairs; ++i)
      if (!used[i]) free_pairs.push_back(i);
    for (const Edge& e : tree) edges.emplace_back(e.u + offset, e.v + offset);
    for (auto pick : detail::sample_without_replacement(free_pairs.size(), m - tree.size(), rng)) {
      auto [a, b] = detail::unrank_pair(free_pairs[pick], s);
      edges.emplace_back(static_cast<Vertex>(a) + offset, static_cast<Vertex>(b) + offset);
    }
  }

  for (const Edge& be : base.edges()) {
    const std::size_t si = sizes[be.u], sj = sizes[be.v];
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(spec.external_density * static_cast<double>(si * sj))));
    for (auto idx : detail::sample_without_replacement(si * sj, m, rng)) {
      const auto a = static_cast<Vertex>(first[be.u] + idx / sj);
      const auto b = static_cast<Vertex>(first[be.v] + idx % sj);
      edges.emplace_back(a, b);
    }
  }

  return {Graph(first[k], std::move(edges)), ClusterLabeling(std::move(labels))};
}

/// Base graph + expansion from a single spec, seeded by spec.seed.
inline ClusteredGraph generate_clustered(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Graph base = generate_base(spec.base, spec.cluster_count, rng, spec.regular_degree, spec.base_edges);
  return expand_clustered(base, spec, rng);
}

namespace detail {

inline std::string_view nearest_bucket(double value, const std::array<double, 5>& levels) {
  static constexpr std::array<std::string_view, 5> names{"verysparse", "sparse", "mid", "dense",
                                                         "verydense"};
  std::size_t best = 0;
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (std::abs(std::log(value / levels[i])) < std::abs(std::log(value / levels[best]))) best = i;
  return names[best];
}

}  // namespace detail

/// Density levels behind the naming vocabulary.
inline constexpr std::array<double, 5> kInternalDensityLevels{0.01, 0.05, 0.1, 0.2, 0.4};
inline constexpr std::array<double, 5> kExternalDensityLevels{0.001, 0.005, 0.01, 0.02, 0.04};

inline std::string_view cluster_count_bucket(std::size_t count) {
  if (count <= 15) return "few";
  if (count <= 24) return "mid";
  return "many";
}

/// `<prefix>-<clusters>-<internal>-<external>`, e.g. "c-few-verydense-mid".
inline std::string dataset_name(const GeneratorSpec& spec) {
  std::string prefix = spec.name_prefix;
  if (prefix.empty()) {
    switch (spec.base) {
      case BaseKind::complete: prefix = spec.variable_sizes() ? "cv" : "c"; break;
      case BaseKind::complete_variable: prefix = "cv"; break;
      case BaseKind::bipartite: prefix = "b"; break;
      case BaseKind::star: prefix = "s"; break;
      case BaseKind::tree: prefix = "t"; break;
      case BaseKind::path: prefix = "p"; break;
      case BaseKind::regular: prefix = "r" + std::to_string(spec.regular_degree); break;
      case BaseKind::gnm: prefix = "gnm"; break;
    }
  }
  std::string name = prefix;
  name += '-';
  name += cluster_count_bucket(spec.cluster_count);
  name += '-';
  name += detail::nearest_bucket(spec.internal_density, kInternalDensityLevels);
  name += '-';
  name += detail::nearest_bucket(spec.external_density, kExternalDensityLevels);
  return name;
}

/// Expected |E| of generate_clustered for fixed-size specs, from the rounding
/// rules above.
inline double expected_edge_count(const GeneratorSpec& spec, const Graph& base) {
  const std::size_t s = spec.cluster_size_min;
  const double internal = std::max<double>(
      static_cast<double>(s - 1),
      static_cast<double>(std::llround(spec.internal_density * static_cast<double>(detail::pair_count(s)))));
  const double external = std::max<double>(
      1.0, static_cast<double>(std::llround(spec.external_density * static_cast<double>(s * s))));
  return static_cast<double>(spec.cluster_count) * internal +
         static_cast<double>(base.edge_count()) * external;
}

}  // namespace cq
