#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "cq/experiments.hpp"
#include "cq/generators.hpp"
#include "cq/graph.hpp"
#include "cq/io.hpp"
#include "cq/metrics.hpp"

namespace cq {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

inline Json to_json(const CQReport& r) {
  Json j;
  j["cq_ari"] = r.cq_ari;
  j["cq_ami"] = r.cq_ami;
  j["cq_fmi"] = r.cq_fmi;
  j["cq_hom"] = r.cq_hom;
  j["cq_cmp"] = r.cq_cmp;
  j["n"] = r.n;
  j["k"] = r.k;
  j["k_predicted"] = r.k_predicted;
  j["seed"] = r.seed;
  j["layout"] = r.layout;
  j["ami_normalizer"] = CQReport::ami_normalizer;
  j["flags"] = r.flags;
  return j;
}

inline CQReport report_from_json(const Json& j) {
  CQReport r;
  r.cq_ari = j.at("cq_ari").get<double>();
  r.cq_ami = j.at("cq_ami").get<double>();
  r.cq_fmi = j.at("cq_fmi").get<double>();
  r.cq_hom = j.at("cq_hom").get<double>();
  r.cq_cmp = j.at("cq_cmp").get<double>();
  r.n = j.value("n", std::size_t{0});
  r.k = j.value("k", std::size_t{0});
  r.k_predicted = j.value("k_predicted", std::size_t{0});
  r.seed = j.value("seed", std::uint64_t{0});
  r.layout = j.value("layout", std::string{});
  r.flags = j.value("flags", std::vector<std::string>{});
  return r;
}

// ---------------------------------------------------------------------------
// CSV: dataset,layout_or_step,metric,score

inline constexpr const char* kCsvHeader = "dataset,layout_or_step,metric,score\n";

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void csv_row(std::string& out, std::string_view dataset, std::string_view key, std::string_view metric,
                    std::string_view score) {
  out += csv_field(dataset);
  out += ',';
  out += csv_field(key);
  out += ',';
  out += metric;
  out += ',';
  out += score;
  out += '\n';
}

inline std::string score_text(double v) { return std::isfinite(v) ? format_double(v) : std::string("NA"); }

}  // namespace detail

inline void append_csv(std::string& out, std::string_view dataset, std::string_view key, const CQReport& r) {
  for (std::size_t m = 0; m < kMetricCount; ++m)
    detail::csv_row(out, dataset, key, kMetricNames[m], detail::score_text(metric_value(r, m)));
}

inline std::string report_csv(std::string_view dataset, const CQReport& r) {
  std::string out = kCsvHeader;
  append_csv(out, dataset, r.layout, r);
  return out;
}

inline Json to_json(const Aggregate& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.keys.size(); ++i) {
    Json row;
    row["key"] = a.keys[i];
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      const double v = a.means[i][m];
      row[kMetricNames[m]] = std::isfinite(v) ? Json(v) : Json(nullptr);
    }
    row["present"] = a.present[i];
    row["missing"] = a.missing[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void append_aggregate_csv(std::string& out, std::string_view dataset, const Aggregate& a) {
  for (std::size_t i = 0; i < a.keys.size(); ++i)
    for (std::size_t m = 0; m < kMetricCount; ++m)
      detail::csv_row(out, dataset, a.keys[i], kMetricNames[m], detail::score_text(a.means[i][m]));
}

// ---------------------------------------------------------------------------
// Deformation results

inline Json to_json(const ScoreSeries& s) {
  Json j;
  j["dataset"] = s.dataset;
  j["layout"] = s.layout;
  j["seed"] = s.seed;
  Json steps = Json::array();
  for (std::size_t t = 0; t < s.entries.size(); ++t) {
    Json e = to_json(s.entries[t]);
    e["step"] = t;
    if (t < s.deltas.size()) e["delta"] = s.deltas[t];
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  return j;
}

/// Distinct dataset names in first-seen order.
inline std::vector<std::string> series_datasets(std::span<const ScoreSeries> series) {
  std::vector<std::string> names;
  for (const auto& s : series)
    if (std::find(names.begin(), names.end(), s.dataset) == names.end()) names.push_back(s.dataset);
  return names;
}

inline std::vector<ScoreSeries> series_of(std::span<const ScoreSeries> series, std::string_view dataset) {
  std::vector<ScoreSeries> out;
  for (const auto& s : series)
    if (s.dataset == dataset) out.push_back(s);
  return out;
}

inline Json deformation_results_json(std::span<const ScoreSeries> series) {
  Json j;
  j["mode"] = "deform";
  Json runs = Json::array();
  for (const auto& s : series) runs.push_back(to_json(s));
  j["runs"] = std::move(runs);
  Json per = Json::object();
  for (const auto& name : series_datasets(series)) {
    const auto subset = series_of(series, name);
    per[name] = to_json(aggregate(std::span<const ScoreSeries>(subset)));
  }
  j["per_dataset_mean"] = std::move(per);
  j["mean"] = to_json(aggregate(series));
  return j;
}

/// Per-dataset means over repetitions, then the overall mean under dataset
/// "mean".
inline std::string deformation_results_csv(std::span<const ScoreSeries> series) {
  std::string out = kCsvHeader;
  for (const auto& name : series_datasets(series)) {
    const auto subset = series_of(series, name);
    append_aggregate_csv(out, name, aggregate(std::span<const ScoreSeries>(subset)));
  }
  append_aggregate_csv(out, "mean", aggregate(series));
  return out;
}

// ---------------------------------------------------------------------------
// Comparison results

inline Json comparison_results_json(const ComparisonMatrix& m) {
  Json j;
  j["mode"] = "compare";
  j["datasets"] = m.datasets;
  j["layouts"] = m.layouts;
  Json cells = Json::array();
  for (std::size_t d = 0; d < m.datasets.size(); ++d)
    for (std::size_t l = 0; l < m.layouts.size(); ++l) {
      const auto& c = m.cells[d][l];
      Json cell;
      cell["dataset"] = m.datasets[d];
      cell["layout"] = m.layouts[l];
      cell["layout_seed"] = c.layout_seed;
      if (c.report) {
        cell["report"] = to_json(*c.report);
      } else {
        cell["report"] = nullptr;
        cell["error"] = c.error;
      }
      cells.push_back(std::move(cell));
    }
  j["cells"] = std::move(cells);
  j["mean"] = to_json(aggregate(m));
  return j;
}

/// Missing cells are written with score NA.
inline std::string comparison_results_csv(const ComparisonMatrix& m) {
  std::string out = kCsvHeader;
  for (std::size_t d = 0; d < m.datasets.size(); ++d)
    for (std::size_t l = 0; l < m.layouts.size(); ++l) {
      const auto& c = m.cells[d][l];
      if (c.report) {
        append_csv(out, m.datasets[d], m.layouts[l], *c.report);
      } else {
        for (const char* metric : kMetricNames) detail::csv_row(out, m.datasets[d], m.layouts[l], metric, "NA");
      }
    }
  append_aggregate_csv(out, "mean", aggregate(m));
  return out;
}

// ---------------------------------------------------------------------------
// Generator specs and sidecars

inline Json to_json(const GeneratorSpec& s) {
  Json j;
  j["base"] = std::string(to_string(s.base));
  j["cluster_count"] = s.cluster_count;
  j["cluster_size_min"] = s.cluster_size_min;
  j["cluster_size_max"] = s.cluster_size_max;
  j["internal_density"] = s.internal_density;
  j["external_density"] = s.external_density;
  if (s.base == BaseKind::regular) j["regular_degree"] = s.regular_degree;
  if (s.base == BaseKind::gnm) j["base_edges"] = s.base_edges;
  j["seed"] = s.seed;
  if (!s.name_prefix.empty()) j["name_prefix"] = s.name_prefix;
  return j;
}

/// Reads a spec; `size` sets both size bounds, absent keys keep defaults.
inline GeneratorSpec generator_spec_from_json(const Json& j) {
  GeneratorSpec s;
  try {
    if (j.contains("base")) s.base = parse_base_kind(j.at("base").get<std::string>());
    s.cluster_count = j.value("cluster_count", s.cluster_count);
    if (j.contains("size")) s.cluster_size_min = s.cluster_size_max = j.at("size").get<std::size_t>();
    s.cluster_size_min = j.value("cluster_size_min", s.cluster_size_min);
    s.cluster_size_max = j.value("cluster_size_max", s.cluster_size_max);
    s.internal_density = j.value("internal_density", s.internal_density);
    s.external_density = j.value("external_density", s.external_density);
    s.regular_degree = j.value("regular_degree", s.regular_degree);
    s.base_edges = j.value("base_edges", s.base_edges);
    s.seed = j.value("seed", s.seed);
    s.name_prefix = j.value("name_prefix", s.name_prefix);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("generator spec: ") + e.what());
  }
  s.validate();
  return s;
}

struct GraphStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t clusters = 0;
  double density = 0.0;
  double avg_cluster_density = 0.0;
};

inline GraphStats graph_stats(const Graph& g, const ClusterLabeling& c) {
  return {g.vertex_count(), g.edge_count(), c.cluster_count(), density(g), avg_cluster_density(g, c)};
}

inline Json to_json(const GraphStats& s) {
  Json j;
  j["vertices"] = s.vertices;
  j["edges"] = s.edges;
  j["clusters"] = s.clusters;
  j["density"] = s.density;
  j["avg_cluster_density"] = s.avg_cluster_density;
  return j;
}

inline Json generator_sidecar(const GeneratorSpec& spec, const ClusteredGraph& cg) {
  Json j;
  j["name"] = dataset_name(spec);
  j["spec"] = to_json(spec);
  j["stats"] = to_json(graph_stats(cg.graph, cg.labels));
  j["version"] = kVersion;
  return j;
}

// ---------------------------------------------------------------------------
// Run manifest

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Everything needed to re-run a command. Deliberately free of timestamps
/// and host details so equal runs serialize to equal bytes.
struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t master_seed = 0;
  std::vector<InputDigest> inputs;
  std::string version = kVersion;
};

inline Json to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["master_seed"] = m.master_seed;
  j["parameters"] = m.parameters;
  Json inputs = Json::array();
  for (const auto& in : m.inputs) inputs.push_back(Json{{"path", in.path}, {"sha256", in.sha256}});
  j["inputs"] = std::move(inputs);
  j["version"] = m.version;
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cq
