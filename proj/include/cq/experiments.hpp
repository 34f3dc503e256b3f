#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cq/detail/parallel.hpp"
#include "cq/error.hpp"
#include "cq/graph.hpp"
#include "cq/kmeans.hpp"
#include "cq/layout.hpp"
#include "cq/layouts.hpp"
#include "cq/metrics.hpp"
#include "cq/random.hpp"

namespace cq {

inline constexpr std::size_t kMetricCount = 5;

/// Scores one drawing: k-means with k = number of ground-truth clusters,
/// then the five comparison indices.
inline CQReport score_layout(const ClusterLabeling& truth, std::span<const Point> layout, KMeansConfig kmeans_cfg) {
  if (layout.size() != truth.size())
    throw InvalidArgument("layout has " + std::to_string(layout.size()) + " positions, labeling " +
                          std::to_string(truth.size()));
  kmeans_cfg.k = truth.cluster_count();
  auto km = kmeans(layout, kmeans_cfg);
  CQReport r = cq_scores(truth, km.labels);
  r.seed = kmeans_cfg.seed;
  return r;
}

// ---------------------------------------------------------------------------
// Deformation

struct DeformationConfig {
  int steps = 10;
  /// delta = rho * longer bounding-box side of the current drawing.
  double rho = 0.075;
  std::uint64_t seed = 1;
  bool keep_layouts = false;

  void validate() const {
    if (steps < 1) throw InvalidArgument("deformation needs steps >= 1");
    if (!(rho >= 0.0)) throw InvalidArgument("deformation rho must be >= 0");
  }
};

/// Moves every vertex by a uniform random angle and a magnitude uniform in
/// [0, delta].
inline Layout deform_step(std::span<const Point> layout, double delta, Rng& rng) {
  if (!(delta >= 0.0)) throw InvalidArgument("deformation delta must be >= 0");
  Layout out(layout.begin(), layout.end());
  for (Point& p : out) {
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    const double r = delta * uniform01(rng);
    p.x += r * std::cos(angle);
    p.y += r * std::sin(angle);
  }
  return out;
}

/// Scores per step (or per layout) with identifying metadata.
struct ScoreSeries {
  std::string dataset;
  std::string layout;
  std::uint64_t seed = 0;
  std::vector<CQReport> entries;
  std::vector<double> deltas;  // deformation only: delta used to reach step t (0 at step 0)
  std::vector<Layout> layouts;  // filled when keep_layouts is set
};

/// Step 0 scores layout0; each following step perturbs the previous step's
/// drawing. k-means is reseeded per step from kmeans_cfg.seed.
inline ScoreSeries run_deformation(const Graph& g, const ClusterLabeling& truth, std::span<const Point> layout0,
                                   const DeformationConfig& cfg, const KMeansConfig& kmeans_cfg) {
  cfg.validate();
  if (layout0.size() != g.vertex_count() || truth.size() != g.vertex_count())
    throw InvalidArgument("layout and labeling must cover all vertices of the graph");
  ScoreSeries series;
  series.seed = cfg.seed;
  Rng rng(derive_seed(cfg.seed, {tag_of("deform")}));
  Layout current(layout0.begin(), layout0.end());
  for (int t = 0; t <= cfg.steps; ++t) {
    double delta = 0.0;
    if (t > 0) {
      delta = cfg.rho * bounding_box(current).longer_side();
      current = deform_step(current, delta, rng);
    }
    KMeansConfig kc = kmeans_cfg;
    kc.seed = derive_seed(kmeans_cfg.seed, {tag_of("step"), static_cast<std::uint64_t>(t)});
    series.entries.push_back(score_layout(truth, current, kc));
    series.deltas.push_back(delta);
    if (cfg.keep_layouts) series.layouts.push_back(current);
  }
  return series;
}

// ---------------------------------------------------------------------------
// Datasets and layout specs shared by both experiment protocols

struct Dataset {
  std::string name;
  Graph graph;
  ClusterLabeling truth;
};

/// Either a built-in algorithm or externally computed coordinates keyed by
/// dataset name.
struct LayoutSpec {
  std::string name;
  std::optional<Algorithm> algorithm;
  std::map<std::string, Layout> imported;
  /// Per-dataset load failures, reported as missing cells.
  std::map<std::string, std::string> import_errors;

  static LayoutSpec builtin(Algorithm a) { return {std::string(to_string(a)), a, {}, {}}; }
  static LayoutSpec from_files(std::string name, std::map<std::string, Layout> per_dataset) {
    return {std::move(name), std::nullopt, std::move(per_dataset), {}};
  }
};

/// Builds (or looks up) the drawing of one dataset.
inline Layout produce_layout(const LayoutSpec& spec, const Dataset& ds, const LayoutConfig& cfg) {
  if (spec.algorithm) return compute_layout(*spec.algorithm, ds.graph, cfg);
  if (auto err = spec.import_errors.find(ds.name); err != spec.import_errors.end())
    throw InvalidArgument("layout '" + spec.name + "' for '" + ds.name + "': " + err->second);
  auto it = spec.imported.find(ds.name);
  if (it == spec.imported.end())
    throw InvalidArgument("layout '" + spec.name + "' has no coordinates for dataset '" + ds.name + "'");
  if (it->second.size() != ds.graph.vertex_count())
    throw InvalidArgument("layout '" + spec.name + "' for '" + ds.name + "' has " +
                          std::to_string(it->second.size()) + " positions, graph has " +
                          std::to_string(ds.graph.vertex_count()));
  require_finite(it->second, "imported layout");
  return it->second;
}

struct ExperimentConfig {
  std::uint64_t seed = 1;
  LayoutConfig layout;
  KMeansConfig kmeans;
  unsigned jobs = 1;
};

/// Seeds for a (dataset, layout) cell, derived from the master seed.
inline std::uint64_t cell_layout_seed(std::uint64_t master, std::size_t dataset, std::size_t layout) {
  return derive_seed(master, {tag_of("layout"), dataset, layout});
}
inline std::uint64_t cell_kmeans_seed(std::uint64_t master, std::size_t dataset, std::size_t layout) {
  return derive_seed(master, {tag_of("kmeans"), dataset, layout});
}

// ---------------------------------------------------------------------------
// Deformation experiment: datasets x repetitions

struct DeformationExperimentConfig {
  ExperimentConfig base;
  DeformationConfig deformation;
  int repetitions = 5;
};

/// For each dataset, draws layout0 once with `initial`, then runs
/// `repetitions` independent deformation series from it. Output order is
/// dataset-major.
inline std::vector<ScoreSeries> run_deformation_experiment(std::span<const Dataset> datasets,
                                                           const LayoutSpec& initial,
                                                           const DeformationExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  std::vector<Layout> initial_layouts(datasets.size());
  detail::parallel_for(datasets.size(), cfg.base.jobs, [&](std::size_t d) {
    LayoutConfig lc = cfg.base.layout;
    lc.seed = cell_layout_seed(cfg.base.seed, d, 0);
    initial_layouts[d] = produce_layout(initial, datasets[d], lc);
  });

  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  std::vector<ScoreSeries> out(datasets.size() * reps);
  detail::parallel_for(out.size(), cfg.base.jobs, [&](std::size_t cell) {
    const std::size_t d = cell / reps, r = cell % reps;
    DeformationConfig dc = cfg.deformation;
    dc.seed = derive_seed(cfg.base.seed, {tag_of("deform-run"), d, r});
    KMeansConfig kc = cfg.base.kmeans;
    kc.seed = derive_seed(cfg.base.seed, {tag_of("deform-kmeans"), d, r});
    ScoreSeries s = run_deformation(datasets[d].graph, datasets[d].truth, initial_layouts[d], dc, kc);
    s.dataset = datasets[d].name;
    s.layout = initial.name;
    for (auto& e : s.entries) e.layout = initial.name;
    out[cell] = std::move(s);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Layout comparison

struct ComparisonCell {
  std::optional<CQReport> report;
  std::string error;
  std::uint64_t layout_seed = 0;
  Layout layout;  // kept only when requested
};

struct ComparisonMatrix {
  std::vector<std::string> datasets;
  std::vector<std::string> layouts;
  std::vector<std::vector<ComparisonCell>> cells;  // [dataset][layout]
};

/// One CQReport per (dataset, layout). A failing cell is recorded as missing
/// with its error; a dataset where every layout fails raises an Error.
inline ComparisonMatrix run_layout_comparison(std::span<const Dataset> datasets, std::span<const LayoutSpec> layouts,
                                              const ExperimentConfig& cfg, bool keep_layouts = false) {
  if (layouts.empty()) throw InvalidArgument("layout comparison needs at least one layout");
  ComparisonMatrix m;
  for (const auto& d : datasets) m.datasets.push_back(d.name);
  for (const auto& l : layouts) m.layouts.push_back(l.name);
  m.cells.assign(datasets.size(), std::vector<ComparisonCell>(layouts.size()));

  const std::size_t cols = layouts.size();
  detail::parallel_for(datasets.size() * cols, cfg.jobs, [&](std::size_t idx) {
    const std::size_t d = idx / cols, l = idx % cols;
    ComparisonCell& cell = m.cells[d][l];
    LayoutConfig lc = cfg.layout;
    lc.seed = cell.layout_seed = cell_layout_seed(cfg.seed, d, l);
    KMeansConfig kc = cfg.kmeans;
    kc.seed = cell_kmeans_seed(cfg.seed, d, l);
    try {
      Layout drawing = produce_layout(layouts[l], datasets[d], lc);
      CQReport r = score_layout(datasets[d].truth, drawing, kc);
      r.layout = layouts[l].name;
      cell.report = std::move(r);
      if (keep_layouts) cell.layout = std::move(drawing);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const bool any = std::any_of(m.cells[d].begin(), m.cells[d].end(), [](const auto& c) { return c.report.has_value(); });
    if (!any)
      throw Error("every layout failed for dataset '" + datasets[d].name + "': " + m.cells[d].front().error);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Per-key means of the five scores over the cells that are present.
struct Aggregate {
  std::vector<std::string> keys;
  std::vector<std::array<double, kMetricCount>> means;
  std::vector<std::size_t> present;
  std::vector<std::size_t> missing;
};

/// Per layout, over datasets.
inline Aggregate aggregate(const ComparisonMatrix& m) {
  Aggregate a;
  a.keys = m.layouts;
  for (std::size_t l = 0; l < m.layouts.size(); ++l) {
    std::array<double, kMetricCount> sum{};
    std::size_t have = 0, miss = 0;
    for (std::size_t d = 0; d < m.datasets.size(); ++d) {
      const auto& cell = m.cells[d][l];
      if (!cell.report) {
        ++miss;
        continue;
      }
      ++have;
      for (std::size_t k = 0; k < kMetricCount; ++k) sum[k] += metric_value(*cell.report, k);
    }
    for (double& s : sum) s = have ? s / static_cast<double>(have) : std::nan("");
    a.means.push_back(sum);
    a.present.push_back(have);
    a.missing.push_back(miss);
  }
  return a;
}

/// Per step index, over series.
inline Aggregate aggregate(std::span<const ScoreSeries> series) {
  if (series.empty()) throw InvalidArgument("nothing to aggregate");
  std::size_t steps = 0;
  for (const auto& s : series) steps = std::max(steps, s.entries.size());
  Aggregate a;
  for (std::size_t t = 0; t < steps; ++t) {
    std::array<double, kMetricCount> sum{};
    std::size_t have = 0;
    for (const auto& s : series) {
      if (t >= s.entries.size()) continue;
      ++have;
      for (std::size_t k = 0; k < kMetricCount; ++k) sum[k] += metric_value(s.entries[t], k);
    }
    for (double& v : sum) v /= static_cast<double>(have);
    a.keys.push_back(std::to_string(t));
    a.means.push_back(sum);
    a.present.push_back(have);
    a.missing.push_back(series.size() - have);
  }
  return a;
}

/// Average ranks (1-based), ties share the mean rank.
inline std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

/// Spearman rank correlation (Pearson correlation of average ranks).
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal samples of size >= 2");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace cq
