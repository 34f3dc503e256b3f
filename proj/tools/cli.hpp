#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cq/cq.hpp"
#include "cq/serialize.hpp"
#include "digest.hpp"

namespace cq::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Bad flags or an unusable config document.
struct UsageError : Error {
  using Error::Error;
};

/// Reads data files and remembers their digests for the manifest.
class Inputs {
 public:
  std::string read(const fs::path& path) {
    std::string text = read_file(path);
    digests_.push_back({path.generic_string(), sha256_hex(text)});
    return text;
  }
  const std::vector<InputDigest>& digests() const noexcept { return digests_; }

 private:
  std::vector<InputDigest> digests_;
};

inline Dataset load_dataset_files(Inputs& in, std::string name, const fs::path& graph, const fs::path& labels) {
  LoadedGraph lg = load_edge_list(in.read(graph));
  ClusterLabeling truth = load_labels(in.read(labels), lg.graph.vertex_count());
  return {std::move(name), std::move(lg.graph), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Experiment config documents

struct ExperimentSetup {
  std::string mode;
  std::vector<Dataset> datasets;
  std::vector<LayoutSpec> layouts;  // compare
  LayoutSpec initial;               // deform
  DeformationExperimentConfig cfg;
  fs::path out_dir;
  bool drawings = true;
  bool charts = true;
  Json resolved;
};

namespace detail {

template <typename T>
T get(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(std::string("config: '") + key + "' has the wrong type");
  }
}

inline fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return fs::absolute(path.is_absolute() ? path : base / path).lexically_normal();
}

inline LayoutConfig layout_config_from(const Json& j, LayoutConfig c = {}) {
  c.max_iterations = get(j, "max_iterations", c.max_iterations);
  c.convergence_tol = get(j, "convergence_tol", c.convergence_tol);
  c.fr_initial_temperature = get(j, "fr_initial_temperature", c.fr_initial_temperature);
  c.stress_weight_exponent = get(j, "stress_weight_exponent", c.stress_weight_exponent);
  c.stress_init_classical = get(j, "stress_init_classical", c.stress_init_classical);
  c.linlog_initial_step = get(j, "linlog_initial_step", c.linlog_initial_step);
  return c;
}

inline Json to_json(const LayoutConfig& c) {
  return Json{{"max_iterations", c.max_iterations},
              {"convergence_tol", c.convergence_tol},
              {"fr_initial_temperature", c.fr_initial_temperature},
              {"stress_weight_exponent", c.stress_weight_exponent},
              {"stress_init_classical", c.stress_init_classical},
              {"linlog_initial_step", c.linlog_initial_step}};
}

inline KMeansConfig kmeans_config_from(const Json& j, KMeansConfig c = {}) {
  c.restarts = get(j, "restarts", c.restarts);
  c.max_iterations = get(j, "max_iterations", c.max_iterations);
  c.tol = get(j, "tol", c.tol);
  return c;
}

inline Json to_json(const KMeansConfig& c) {
  return Json{{"restarts", c.restarts}, {"max_iterations", c.max_iterations}, {"tol", c.tol}};
}

/// A layout entry is an algorithm name or {"name", "algorithm"} or
/// {"name", "files": {dataset: path}}. Import problems become per-dataset
/// errors so the run can continue.
inline LayoutSpec layout_spec_from(const Json& j, const fs::path& base, Inputs& in,
                                   const std::vector<Dataset>& datasets, Json& echo) {
  try {
    if (j.is_string()) {
      LayoutSpec s = LayoutSpec::builtin(parse_algorithm(j.get<std::string>()));
      echo = s.name;
      return s;
    }
    if (!j.is_object()) throw UsageError("config: layout entries must be strings or objects");
    if (j.contains("algorithm")) {
      LayoutSpec s = LayoutSpec::builtin(parse_algorithm(j.at("algorithm").get<std::string>()));
      s.name = get(j, "name", s.name);
      echo = Json{{"name", s.name}, {"algorithm", std::string(to_string(*s.algorithm))}};
      return s;
    }
    if (!j.contains("files") || !j.at("files").is_object() || !j.contains("name"))
      throw UsageError("config: imported layouts need 'name' and a 'files' object");
    LayoutSpec s = LayoutSpec::from_files(j.at("name").get<std::string>(), {});
    Json files = Json::object();
    for (const auto& [ds_name, path_json] : j.at("files").items()) {
      const fs::path path = resolve(base, path_json.get<std::string>());
      files[ds_name] = path.generic_string();
      auto ds = std::find_if(datasets.begin(), datasets.end(), [&](const Dataset& d) { return d.name == ds_name; });
      try {
        const std::string text = in.read(path);
        s.imported[ds_name] =
            import_layout(text, ds == datasets.end() ? std::nullopt : std::optional(ds->graph.vertex_count()));
      } catch (const Error& e) {
        s.import_errors[ds_name] = e.what();
      }
    }
    echo = Json{{"name", s.name}, {"files", files}};
    return s;
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

}  // namespace detail

/// Flag values that override the config document when present.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> out_dir;
  std::optional<int> steps;
  std::optional<double> rho;
  std::optional<int> repetitions;
  std::optional<int> restarts;
  bool no_render = false;
};

/// Loads a deform/compare config. A manifest written by an earlier run is
/// accepted too: its "parameters" object is the resolved config.
inline ExperimentSetup load_experiment(const std::string& mode, const fs::path& config_path, const Overrides& ov,
                                       Inputs& in) {
  Json doc;
  try {
    doc = Json::parse(read_file(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("cannot parse config " + config_path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError(std::string("cannot read config: ") + e.what());
  }
  if (doc.is_object() && doc.contains("command") && doc.contains("parameters")) doc = doc.at("parameters");
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  if (doc.contains("mode") && doc.at("mode") != mode)
    throw UsageError("config is for mode '" + doc.at("mode").get<std::string>() + "', not '" + mode + "'");
  const fs::path base = config_path.parent_path();

  ExperimentSetup s;
  s.mode = mode;
  auto& cfg = s.cfg;
  cfg.base.seed = ov.seed.value_or(detail::get<std::uint64_t>(doc, "seed", 1));
  cfg.base.jobs = ov.jobs.value_or(detail::get<unsigned>(doc, "jobs", 1));
  if (cfg.base.jobs < 1) cfg.base.jobs = 1;
  s.out_dir = ov.out_dir ? fs::absolute(fs::path(*ov.out_dir)).lexically_normal()
                         : detail::resolve(base, detail::get<std::string>(doc, "out_dir", "out/" + mode));
  cfg.base.layout = detail::layout_config_from(doc.value("layout", Json::object()));
  cfg.base.kmeans = detail::kmeans_config_from(doc.value("kmeans", Json::object()));
  if (ov.restarts) cfg.base.kmeans.restarts = *ov.restarts;
  const Json render = doc.value("render", Json::object());
  s.drawings = !ov.no_render && detail::get(render, "drawings", true);
  s.charts = !ov.no_render && detail::get(render, "charts", true);

  // Datasets.
  if (!doc.contains("datasets") || !doc.at("datasets").is_array() || doc.at("datasets").empty())
    throw UsageError("config needs a non-empty 'datasets' array");
  Json ds_echo = Json::array();
  for (const Json& d : doc.at("datasets")) {
    if (d.contains("generate")) {
      GeneratorSpec spec;
      try {
        spec = generator_spec_from_json(d.at("generate"));
      } catch (const InvalidArgument& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      ClusteredGraph cg = generate_clustered(spec);
      std::string name = detail::get(d, "name", dataset_name(spec));
      ds_echo.push_back(Json{{"name", name}, {"generate", cq::to_json(spec)}});
      s.datasets.push_back({std::move(name), std::move(cg.graph), std::move(cg.labels)});
    } else if (d.contains("graph") && d.contains("labels")) {
      const fs::path g = detail::resolve(base, detail::get<std::string>(d, "graph", ""));
      const fs::path l = detail::resolve(base, detail::get<std::string>(d, "labels", ""));
      std::string name = detail::get(d, "name", g.stem().string());
      ds_echo.push_back(Json{{"name", name}, {"graph", g.generic_string()}, {"labels", l.generic_string()}});
      s.datasets.push_back(load_dataset_files(in, std::move(name), g, l));
    } else {
      throw UsageError("config: each dataset needs 'generate' or both 'graph' and 'labels'");
    }
  }
  for (std::size_t i = 0; i < s.datasets.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (s.datasets[i].name == s.datasets[j].name)
        throw UsageError("config: duplicate dataset name '" + s.datasets[i].name + "'");

  Json& r = s.resolved;
  r["mode"] = mode;
  r["seed"] = cfg.base.seed;
  r["jobs"] = cfg.base.jobs;
  r["out_dir"] = s.out_dir.generic_string();
  r["datasets"] = ds_echo;

  if (mode == "deform") {
    const Json dj = doc.value("deformation", Json::object());
    auto& dc = cfg.deformation;
    dc.steps = ov.steps.value_or(detail::get(dj, "steps", dc.steps));
    dc.rho = ov.rho.value_or(detail::get(dj, "rho", dc.rho));
    cfg.repetitions = ov.repetitions.value_or(detail::get(dj, "repetitions", cfg.repetitions));
    try {
      dc.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    if (cfg.repetitions < 1) throw UsageError("config: repetitions must be >= 1");
    dc.keep_layouts = s.drawings;
    Json echo;
    s.initial = detail::layout_spec_from(doc.value("initial_layout", Json("linlog")), base, in, s.datasets, echo);
    r["initial_layout"] = echo;
    r["deformation"] = Json{{"steps", dc.steps}, {"rho", dc.rho}, {"repetitions", cfg.repetitions}};
  } else {
    Json layouts = doc.value("layouts", Json::array());
    if (layouts.empty())
      for (Algorithm a : kBuiltinAlgorithms) layouts.push_back(std::string(to_string(a)));
    Json echo_all = Json::array();
    for (const Json& l : layouts) {
      Json echo;
      s.layouts.push_back(detail::layout_spec_from(l, base, in, s.datasets, echo));
      echo_all.push_back(echo);
    }
    for (std::size_t i = 0; i < s.layouts.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (s.layouts[i].name == s.layouts[j].name)
          throw UsageError("config: duplicate layout name '" + s.layouts[i].name + "'");
    r["layouts"] = echo_all;
  }
  r["layout"] = detail::to_json(cfg.base.layout);
  r["kmeans"] = detail::to_json(cfg.base.kmeans);
  r["render"] = Json{{"drawings", s.drawings}, {"charts", s.charts}};
  try {
    cfg.base.layout.validate();
    cfg.base.kmeans.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return s;
}

inline RunManifest make_manifest(const std::string& command, const Json& params, std::uint64_t seed,
                                 const Inputs& in) {
  RunManifest m;
  m.command = command;
  m.parameters = params;
  m.master_seed = seed;
  m.inputs = in.digests();
  return m;
}

/// Writes results.json, results.csv, manifest.json and the SVGs; prints the
/// mean table to stdout in the requested format.
inline int run_experiment(ExperimentSetup& s, const RunManifest& manifest, const std::string& format,
                          std::ostream& out, std::ostream& err) {
  const Json manifest_json = to_json(manifest);
  Json results;
  std::string csv;
  Aggregate mean;
  if (s.mode == "deform") {
    auto series = run_deformation_experiment(s.datasets, s.initial, s.cfg);
    results = deformation_results_json(series);
    csv = deformation_results_csv(series);
    mean = aggregate(std::span<const ScoreSeries>(series));
    if (s.charts)
      write_file_atomic(s.out_dir / "chart_deformation.svg",
                        render_series_chart(mean, ChartKind::line, "Mean scores per deformation step"));
    if (s.drawings) {
      for (const auto& ds : s.datasets) {
        auto first = std::find_if(series.begin(), series.end(), [&](const auto& x) { return x.dataset == ds.name; });
        for (std::size_t t = 0; t < first->layouts.size(); ++t)
          write_file_atomic(s.out_dir / svg_file_name(ds.name, s.initial.name, static_cast<int>(t)),
                            render_drawing(ds.graph, first->layouts[t], ds.truth));
      }
    }
  } else {
    auto m = run_layout_comparison(s.datasets, s.layouts, s.cfg.base, s.drawings);
    for (std::size_t d = 0; d < m.datasets.size(); ++d)
      for (std::size_t l = 0; l < m.layouts.size(); ++l)
        if (!m.cells[d][l].report)
          err << "warning: layout '" << m.layouts[l] << "' failed on '" << m.datasets[d]
              << "': " << m.cells[d][l].error << "\n";
    results = comparison_results_json(m);
    csv = comparison_results_csv(m);
    mean = aggregate(m);
    if (s.charts)
      write_file_atomic(s.out_dir / "chart_comparison.svg",
                        render_series_chart(mean, ChartKind::bars, "Mean scores per layout"));
    if (s.drawings)
      for (std::size_t d = 0; d < m.datasets.size(); ++d)
        for (std::size_t l = 0; l < m.layouts.size(); ++l)
          if (m.cells[d][l].report)
            write_file_atomic(s.out_dir / svg_file_name(m.datasets[d], m.layouts[l]),
                              render_drawing(s.datasets[d].graph, m.cells[d][l].layout, s.datasets[d].truth));
  }
  results["manifest"] = manifest_json;
  write_file_atomic(s.out_dir / "results.json", dump(results));
  write_file_atomic(s.out_dir / "results.csv", csv);
  write_file_atomic(s.out_dir / "manifest.json", dump(manifest_json));

  if (format == "csv") {
    std::string table = kCsvHeader;
    append_aggregate_csv(table, "mean", mean);
    out << table;
  } else {
    out << dump(to_json(mean));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Command line

/// Parses and runs one invocation. Exit codes: 0 success, 1 data error,
/// 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Clustering-quality scoring of graph drawings", "cq"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // Common flags, attached to every subcommand.
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  unsigned jobs = 1;
  std::string format = "json";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--out-dir", out_dir, "Output directory");
    sub->add_option("--jobs", jobs, "Worker threads")->envname("CQ_JOBS")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic clustered graph");
  std::string g_base;
  std::size_t g_clusters = 0, g_size = 0, g_size_min = 0, g_size_max = 0, g_degree = 3, g_base_edges = 0;
  double g_internal = 0.4, g_external = 0.01;
  std::string g_name, g_prefix;
  gen->add_option("--base", g_base, "complete|bipartite|star|tree|path|regular|gnm|complete-variable")->required();
  gen->add_option("--clusters", g_clusters, "Number of clusters")->required();
  auto* o_size = gen->add_option("--size", g_size, "Fixed cluster size");
  auto* o_min = gen->add_option("--size-min", g_size_min, "Smallest cluster size")->excludes(o_size);
  auto* o_max = gen->add_option("--size-max", g_size_max, "Largest cluster size")->excludes(o_size);
  o_min->needs(o_max);
  o_max->needs(o_min);
  gen->add_option("--internal", g_internal, "Internal density");
  gen->add_option("--external", g_external, "External density");
  gen->add_option("--degree", g_degree, "Degree for the regular base");
  gen->add_option("--base-edges", g_base_edges, "Edge count for the gnm base");
  gen->add_option("--name", g_name, "Output file stem (default: dataset name)");
  gen->add_option("--prefix", g_prefix, "Dataset name prefix override");
  common(gen);

  // layout
  auto* lay = app.add_subcommand("layout", "Compute a drawing with a built-in algorithm");
  std::string l_graph, l_algorithm, l_out;
  int l_iterations = 0;
  lay->add_option("--graph", l_graph, "Edge list")->required()->check(CLI::ExistingFile);
  lay->add_option("--algorithm", l_algorithm, "random|fr|linlog|stress|mds|spectral")->required();
  lay->add_option("--iterations", l_iterations, "Iteration cap");
  lay->add_option("--out", l_out, "Layout file (default: stdout)");
  common(lay);

  // score
  auto* sc = app.add_subcommand("score", "Score a drawing against ground-truth clusters");
  std::string s_graph, s_labels, s_layout;
  int s_restarts = 10, s_max_iterations = 300;
  sc->add_option("--graph", s_graph, "Edge list")->required();
  sc->add_option("--labels", s_labels, "Ground-truth labels")->required();
  sc->add_option("--layout", s_layout, "Layout coordinates")->required();
  sc->add_option("--restarts", s_restarts, "k-means restarts")->check(CLI::PositiveNumber);
  sc->add_option("--max-iterations", s_max_iterations, "k-means iteration cap")->check(CLI::PositiveNumber);
  common(sc);

  // deform / compare
  Overrides ov;
  std::string e_config;
  auto experiment = [&](const char* name, const char* what) {
    auto* sub = app.add_subcommand(name, what);
    sub->add_option("--config", e_config, "Config or manifest JSON")->required();
    sub->add_option("--restarts", ov.restarts, "k-means restarts");
    sub->add_flag("--no-render", ov.no_render, "Skip SVG output");
    common(sub);
    return sub;
  };
  auto* def = experiment("deform", "Deformation experiment");
  def->add_option("--steps", ov.steps, "Deformation steps");
  def->add_option("--rho", ov.rho, "Perturbation scale");
  def->add_option("--repetitions", ov.repetitions, "Runs per dataset");
  auto* cmp = experiment("compare", "Layout comparison experiment");

  // render
  auto* ren = app.add_subcommand("render", "Render a drawing or a results chart to SVG");
  std::string r_graph, r_labels, r_layout, r_results, r_out, r_title;
  ren->add_option("--graph", r_graph, "Edge list");
  ren->add_option("--labels", r_labels, "Labels");
  ren->add_option("--layout", r_layout, "Layout coordinates");
  ren->add_option("--results", r_results, "results.json from deform or compare");
  ren->add_option("--title", r_title, "Chart title");
  ren->add_option("--out", r_out, "SVG file")->required();

  // ingest
  auto* ing = app.add_subcommand("ingest", "Normalise an external edge list and labels");
  std::string i_edges, i_labels, i_name;
  bool i_lcc = false, i_remap = false;
  ing->add_option("--edges", i_edges, "Edge list with source ids")->required();
  ing->add_option("--labels", i_labels, "'id cluster' records keyed by source ids");
  ing->add_flag("--lcc", i_lcc, "Keep the largest connected component");
  ing->add_flag("--remap", i_remap, "Renumber sparse source ids densely");
  ing->add_option("--name", i_name, "Output file stem")->required();
  common(ing);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsageError;
  }

  try {
    Inputs in;
    if (gen->parsed()) {
      GeneratorSpec spec;
      try {
        spec.base = parse_base_kind(g_base);
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
      spec.cluster_count = g_clusters;
      if (o_size->count()) {
        spec.cluster_size_min = spec.cluster_size_max = g_size;
      } else if (o_min->count()) {
        spec.cluster_size_min = g_size_min;
        spec.cluster_size_max = g_size_max;
      } else {
        throw UsageError("generate needs --size or --size-min/--size-max");
      }
      spec.internal_density = g_internal;
      spec.external_density = g_external;
      spec.regular_degree = g_degree;
      spec.base_edges = g_base_edges;
      spec.seed = seed;
      spec.name_prefix = g_prefix;
      try {
        spec.validate();
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
      const ClusteredGraph cg = generate_clustered(spec);
      const std::string stem = g_name.empty() ? dataset_name(spec) : g_name;
      Json sidecar = generator_sidecar(spec, cg);
      sidecar["files"] = Json{{"graph", stem + ".edges"}, {"labels", stem + ".labels"}};
      sidecar["manifest"] = to_json(make_manifest("generate", cq::to_json(spec), seed, in));
      const fs::path dir(out_dir);
      write_file_atomic(dir / (stem + ".edges"), write_edge_list(cg.graph));
      write_file_atomic(dir / (stem + ".labels"), write_labels(cg.labels));
      write_file_atomic(dir / (stem + ".json"), dump(sidecar));
      if (format == "csv") {
        const GraphStats st = graph_stats(cg.graph, cg.labels);
        out << "name,vertices,edges,clusters,density,avg_cluster_density\n"
            << dataset_name(spec) << ',' << st.vertices << ',' << st.edges << ',' << st.clusters << ','
            << cq::detail::format_double(st.density) << ',' << cq::detail::format_double(st.avg_cluster_density) << '\n';
      } else {
        out << dump(sidecar);
      }
      return kOk;
    }

    if (lay->parsed()) {
      Algorithm a;
      try {
        a = parse_algorithm(l_algorithm);
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
      const LoadedGraph lg = load_edge_list(in.read(l_graph));
      LayoutConfig cfg;
      cfg.seed = seed;
      if (l_iterations > 0) cfg.max_iterations = l_iterations;
      const std::string text = write_layout(compute_layout(a, lg.graph, cfg));
      if (l_out.empty()) {
        out << text;
      } else {
        write_file_atomic(fs::path(l_out), text);
      }
      return kOk;
    }

    if (sc->parsed()) {
      const LoadedGraph lg = load_edge_list(in.read(s_graph));
      const std::size_t n = lg.graph.vertex_count();
      const ClusterLabeling truth = load_labels(in.read(s_labels), n);
      const Layout pos = import_layout(in.read(s_layout), n);
      KMeansConfig kc;
      kc.seed = seed;
      kc.restarts = s_restarts;
      kc.max_iterations = s_max_iterations;
      CQReport r = score_layout(truth, pos, kc);
      r.layout = fs::path(s_layout).stem().string();
      if (format == "csv") {
        out << report_csv(fs::path(s_graph).stem().string(), r);
      } else {
        out << dump(to_json(r));
      }
      return kOk;
    }

    if (def->parsed() || cmp->parsed()) {
      const std::string mode = def->parsed() ? "deform" : "compare";
      CLI::App* sub = def->parsed() ? def : cmp;
      if (sub->get_option("--seed")->count()) ov.seed = seed;
      if (sub->get_option("--jobs")->count() || std::getenv("CQ_JOBS")) ov.jobs = jobs;
      if (sub->get_option("--out-dir")->count()) ov.out_dir = out_dir;
      ExperimentSetup setup = load_experiment(mode, fs::path(e_config), ov, in);
      const RunManifest manifest = make_manifest(mode, setup.resolved, setup.cfg.base.seed, in);
      return run_experiment(setup, manifest, format, out, err);
    }

    if (ren->parsed()) {
      if (!r_results.empty()) {
        Json doc;
        try {
          doc = Json::parse(in.read(r_results));
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(std::string("results file: ") + e.what(), 0);
        }
        Aggregate a;
        try {
          for (const Json& row : doc.at("mean")) {
            a.keys.push_back(row.at("key").get<std::string>());
            std::array<double, kMetricCount> v{};
            for (std::size_t m = 0; m < kMetricCount; ++m)
              v[m] = row.at(kMetricNames[m]).is_null() ? std::nan("") : row.at(kMetricNames[m]).get<double>();
            a.means.push_back(v);
            a.present.push_back(row.value("present", std::size_t{0}));
            a.missing.push_back(row.value("missing", std::size_t{0}));
          }
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(std::string("results file: ") + e.what(), 0);
        }
        const bool line = doc.value("mode", std::string{}) == "deform";
        write_file_atomic(fs::path(r_out), render_series_chart(a, line ? ChartKind::line : ChartKind::bars, r_title));
        return kOk;
      }
      if (r_graph.empty() || r_labels.empty() || r_layout.empty())
        throw UsageError("render needs --results, or --graph, --labels and --layout");
      const LoadedGraph lg = load_edge_list(in.read(r_graph));
      const std::size_t n = lg.graph.vertex_count();
      const ClusterLabeling labels = load_labels(in.read(r_labels), n);
      const Layout pos = import_layout(in.read(r_layout), n);
      write_file_atomic(fs::path(r_out), render_drawing(lg.graph, pos, labels));
      return kOk;
    }

    if (ing->parsed()) {
      auto [lg, map] = load_edge_list_remapped(in.read(i_edges));
      bool identity = true;
      for (std::size_t i = 0; i < map.original.size(); ++i) identity = identity && map.original[i] == std::int64_t(i);
      if (!identity && !i_remap) throw InvalidArgument("source ids are not 0..n-1; pass --remap");
      Graph g = std::move(lg.graph);
      std::vector<std::int64_t> original = map.original;
      if (i_lcc) {
        const auto keep = largest_component_vertices(g);
        g = induced_subgraph(g, keep);
        std::vector<std::int64_t> kept;
        for (Vertex v : keep) kept.push_back(original[v]);
        original = std::move(kept);
      }
      const fs::path dir(out_dir);
      Json info;
      info["name"] = i_name;
      info["source_vertices"] = map.original.size();
      info["vertices"] = g.vertex_count();
      info["edges"] = g.edge_count();
      info["dropped_duplicates"] = lg.dropped_duplicates;
      info["dropped_self_loops"] = lg.dropped_self_loops;
      info["density"] = g.vertex_count() >= 2 ? density(g) : 0.0;
      if (!i_labels.empty()) {
        IdMap current{original};
        std::vector<std::int64_t> raw(g.vertex_count());
        std::vector<bool> seen(g.vertex_count(), false);
        cq::detail::for_each_record(in.read(i_labels), [&](const auto& tok, std::size_t line) {
          if (tok.size() != 2) throw ParseError("expected 'id cluster'", line);
          const auto id = cq::detail::parse_int(tok[0], line);
          const auto v = current.dense_of(id);
          if (!v) return;  // vertex outside the kept graph
          if (seen[*v]) throw ParseError("duplicate label for id " + std::to_string(id), line);
          seen[*v] = true;
          raw[*v] = cq::detail::parse_int(tok[1], line);
        });
        for (std::size_t v = 0; v < raw.size(); ++v)
          if (!seen[v]) throw ParseError("no label for source id " + std::to_string(original[v]), 0);
        const ClusterLabeling labels = ClusterLabeling::from_raw(raw);
        write_file_atomic(dir / (i_name + ".labels"), write_labels(labels));
        info["clusters"] = labels.cluster_count();
      }
      write_file_atomic(dir / (i_name + ".edges"), write_edge_list(g));
      if (!identity || i_lcc) write_file_atomic(dir / (i_name + ".ids"), write_id_map(IdMap{original}));
      info["manifest"] =
          to_json(make_manifest("ingest", Json{{"lcc", i_lcc}, {"remap", i_remap}, {"name", i_name}}, seed, in));
      write_file_atomic(dir / (i_name + ".json"), dump(info));
      out << dump(info);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace cq::cli
