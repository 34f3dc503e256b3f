// Acceptance checks. Prints one PASS/FAIL line per criterion; exits non-zero
// when a criterion fails that was not named with --expect-fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace cq;

namespace {

const fs::path kSource = CQ_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ClusterLabeling lab(const oracle::Labels& raw) {
  std::vector<std::int64_t> r(raw.begin(), raw.end());
  return ClusterLabeling::from_raw(r);
}

Layout similarity(const Layout& pts, double angle, bool reflect, double scale, Point shift) {
  Layout out;
  const double c = std::cos(angle), s = std::sin(angle);
  for (Point p : pts) {
    if (reflect) p.x = -p.x;
    out.push_back({scale * (c * p.x - s * p.y) + shift.x, scale * (s * p.x + c * p.y) + shift.y});
  }
  return out;
}

cli::ExperimentSetup load(const std::string& mode, const char* config) {
  cli::Overrides ov;
  ov.no_render = true;
  ov.out_dir = (fs::temp_directory_path() / "cq_acceptance" / mode).string();
  cli::Inputs in;
  return cli::load_experiment(mode, kSource / "configs" / config, ov, in);
}

// ---------------------------------------------------------------------------

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    auto a = oracle::random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    auto b = oracle::random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    const auto t = contingency(lab(a), lab(b));
    for (double e : {rand_index(t) - oracle::rand_index(a, b), adjusted_rand_index(t) - oracle::adjusted_rand(a, b),
                     fowlkes_mallows(t) - oracle::fowlkes_mallows(a, b), homogeneity(t) - oracle::homogeneity(a, b),
                     completeness(t) - oracle::completeness(a, b)})
      worst = std::max(worst, std::abs(e));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 10.0, fmt("500 pairs, max |error| %.2e, %.2f s", worst, secs)};
}

Outcome chance_adjustment() {
  oracle::Labels truth(200);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<int>(i % 5);
  std::mt19937_64 rng(2);
  double ari = 0.0, ami = 0.0, ri = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto other = oracle::random_labels(200, 5, rng);
    const auto t = contingency(lab(truth), lab(other));
    ari += adjusted_rand_index(t);
    ami += adjusted_mutual_information(t);
    ri += rand_index(t);
  }
  ari /= 100, ami /= 100, ri /= 100;
  return {std::abs(ari) < 0.02 && std::abs(ami) < 0.02 && ri > 0.5,
          fmt("mean ARI %+.4f, mean AMI %+.4f, mean RI %.3f", ari, ami, ri)};
}

Outcome emi_monte_carlo() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng() % 17;
    auto a = oracle::random_labels(n, 1 + static_cast<int>(rng() % 5), rng);
    auto b = oracle::random_labels(n, 1 + static_cast<int>(rng() % 5), rng);
    const double emi = expected_mutual_information(contingency(lab(a), lab(b)));
    const auto mc = oracle::permutation_mi(a, b, 100000, rng());
    const double z = mc.standard_error > 0 ? std::abs(emi - mc.mean) / mc.standard_error
                                           : (std::abs(emi - mc.mean) < 1e-12 ? 0.0 : 1e9);
    worst = std::max(worst, z);
  }
  return {worst <= 3.0, fmt("20 tables, worst deviation %.2f standard errors", worst)};
}

Outcome perfect_scores() {
  GeneratorSpec spec;
  spec.base = BaseKind::complete;
  spec.cluster_count = 9;
  spec.cluster_size_min = spec.cluster_size_max = 30;
  spec.internal_density = 0.4;
  spec.external_density = 0.01;
  spec.seed = 1;
  const auto cg = generate_clustered(spec);
  KMeansConfig kc;
  LayoutConfig lc;
  const double fr = score_layout(cg.labels, compute_layout(Algorithm::fr, cg.graph, lc), kc).cq_ari;
  const double stress = score_layout(cg.labels, compute_layout(Algorithm::stress, cg.graph, lc), kc).cq_ari;

  // Clusters as tight blobs on a 3x3 grid.
  Layout ideal(cg.graph.vertex_count());
  std::vector<int> seen(9, 0);
  for (Vertex v = 0; v < ideal.size(); ++v) {
    const auto c = cg.labels[v];
    const int i = seen[c]++;
    ideal[v] = {10.0 * (c % 3) + 0.01 * (i % 6), 10.0 * (c / 3) + 0.01 * (i / 6)};
  }
  const auto r = score_layout(cg.labels, ideal, kc);
  bool exact = true;
  for (std::size_t m = 0; m < kMetricCount; ++m) exact = exact && metric_value(r, m) == 1.0;
  return {(fr >= 0.95 || stress >= 0.95) && exact,
          fmt("FR ARI %.3f, stress ARI %.3f (need >= 0.95); grid import all five = 1: %s", fr, stress,
              exact ? "yes" : "no")};
}

struct DeformRun {
  Aggregate mean;
  std::vector<ScoreSeries> series;
  std::size_t datasets = 0, runs = 0;
  double seconds = 0.0;
};

const DeformRun& deformation_run() {
  static const DeformRun run = [] {
    const auto t0 = Clock::now();
    auto setup = load("deform", "deform_synthetic.json");
    auto series = run_deformation_experiment(setup.datasets, setup.initial, setup.cfg);
    DeformRun d;
    d.mean = aggregate(std::span<const ScoreSeries>(series));
    d.datasets = setup.datasets.size();
    d.runs = series.size();
    d.series = std::move(series);
    d.seconds = seconds_since(t0);
    return d;
  }();
  return run;
}

Outcome deformation_trend() {
  const auto& d = deformation_run();
  std::vector<double> steps;
  for (std::size_t t = 0; t < d.mean.keys.size(); ++t) steps.push_back(static_cast<double>(t));
  double worst = -1.0;
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    std::vector<double> y;
    for (const auto& row : d.mean.means) y.push_back(row[m]);
    worst = std::max(worst, spearman(steps, y));
  }
  const double first = d.mean.means.front()[0], last = d.mean.means.back()[0];
  return {d.datasets >= 3 && d.runs >= 5 * d.datasets && d.mean.keys.size() == 11 && worst <= -0.9 &&
              last < 0.5 * first && d.seconds < 120.0,
          fmt("%zu datasets x %zu runs, max Spearman %.3f, ARI %.3f -> %.3f, %.1f s", d.datasets,
              d.runs / std::max<std::size_t>(1, d.datasets), worst, first, last, d.seconds)};
}

Outcome sensitivity_ordering() {
  const auto& d = deformation_run();
  std::array<double, kMetricCount> avg{};
  for (std::size_t t = 3; t <= 6; ++t)
    for (std::size_t m = 0; m < kMetricCount; ++m) avg[m] += d.mean.means[t][m] / 4;
  double gap = 0.0;
  std::size_t cells = 0;
  for (const auto& s : d.series)
    for (std::size_t t = 3; t <= 6; ++t, ++cells) gap += std::abs(s.entries[t].cq_hom - s.entries[t].cq_cmp);
  gap /= static_cast<double>(std::max<std::size_t>(1, cells));
  const double ari = avg[0], ami = avg[1], fmi = avg[2];
  return {ari <= fmi + 0.02 && fmi <= ami + 0.02 && gap < 0.05,
          fmt("steps 3-6: ARI %.3f, FMI %.3f, AMI %.3f, |HOM-CMP| %.3f", ari, fmi, ami, gap)};
}

Outcome layout_ranking() {
  auto setup = load("compare", "compare_synthetic.json");
  const auto m = run_layout_comparison(setup.datasets, setup.layouts, setup.cfg.base);
  const auto agg = aggregate(m);
  auto ari = [&](std::string_view name) {
    for (std::size_t l = 0; l < agg.keys.size(); ++l)
      if (agg.keys[l] == name) return agg.means[l][0];
    return std::nan("");
  };
  const double random = ari("random");
  bool all_beat = true;
  std::string table;
  for (std::size_t l = 0; l < agg.keys.size(); ++l) {
    table += fmt(" %s %.3f", agg.keys[l].c_str(), agg.means[l][0]);
    if (agg.keys[l] != "random") all_beat = all_beat && agg.means[l][0] >= random + 0.2;
  }
  const bool pass = m.datasets.size() >= 5 && ari("linlog") >= ari("mds") && ari("linlog") >= random + 0.3 && all_beat;
  return {pass, fmt("%zu datasets, mean ARI:", m.datasets.size()) + table};
}

Outcome generator_fidelity() {
  std::string detail;
  bool pass = true;
  for (auto [base, k, pout] : {std::tuple{BaseKind::complete, 9u, 0.01}, {BaseKind::star, 10u, 0.02},
                               {BaseKind::tree, 15u, 0.01}, {BaseKind::path, 20u, 0.02}}) {
    GeneratorSpec spec;
    spec.base = base;
    spec.cluster_count = k;
    spec.cluster_size_min = spec.cluster_size_max = 30;
    spec.internal_density = 0.4;
    spec.external_density = pout;
    spec.seed = 8;
    const auto cg = generate_clustered(spec);
    const double s = 30.0, pairs = s * (s - 1) / 2, n = s * k;
    const double base_edges = base == BaseKind::complete ? k * (k - 1) / 2.0 : k - 1.0;
    const double expected = (k * 0.4 * pairs + base_edges * pout * s * s) / (n * (n - 1) / 2);
    const double cd = avg_cluster_density(cg.graph, cg.labels), dens = density(cg.graph);
    pass = pass && cd >= 0.36 && cd <= 0.44 && std::abs(dens / expected - 1.0) <= 0.15;
    detail += fmt("%s avg(cd) %.3f density %.4f/%.4f; ", dataset_name(spec).c_str(), cd, dens, expected);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome pipeline_invariances() {
  std::mt19937_64 rng(9);
  std::vector<std::string> broken;

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    auto a = oracle::random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    auto b = oracle::random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto pa = a;
    for (int& x : pa) x = perm[x];
    const auto r1 = cq_scores(lab(a), lab(b)), r2 = cq_scores(lab(pa), lab(b));
    for (std::size_t m = 0; m < kMetricCount; ++m)
      if (std::abs(metric_value(r1, m) - metric_value(r2, m)) > 1e-12) broken.push_back("label permutation");
    if (homogeneity(contingency(lab(a), lab(b))) != completeness(contingency(lab(b), lab(a))))
      broken.push_back("hom/cmp symmetry");
  }

  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng pts_rng(s);
    Layout pts(100);
    for (Point& p : pts) p = {uniform_real(pts_rng, 0, 10), uniform_real(pts_rng, 0, 10)};
    KMeansConfig kc;
    kc.k = 6;
    kc.seed = s;
    const auto r = kmeans(pts, kc);
    for (std::size_t i = 1; i < r.history.size(); ++i)
      if (r.history[i] > r.history[i - 1] * (1 + 1e-12)) broken.push_back("k-means monotonicity");
  }

  std::vector<Dataset> data;
  for (std::uint64_t s = 0; s < 5; ++s) {
    GeneratorSpec spec;
    spec.base = s % 2 ? BaseKind::tree : BaseKind::path;
    spec.cluster_count = 5 + s;
    spec.cluster_size_min = spec.cluster_size_max = 12;
    spec.internal_density = 0.4;
    spec.external_density = 0.02;
    spec.seed = 100 + s;
    auto cg = generate_clustered(spec);
    data.push_back({dataset_name(spec), std::move(cg.graph), std::move(cg.labels)});
  }

  for (const auto& ds : data) {
    LayoutConfig lc;
    lc.stress_init_classical = false;
    Rng rng_s(lc.seed);
    const auto res = stress_majorization(ds.graph, bfs_all_pairs(ds.graph), lc, rng_s);
    for (std::size_t i = 1; i < res.stress.size(); ++i)
      if (res.stress[i] > res.stress[i - 1] * (1 + 1e-12)) broken.push_back("SMACOF monotonicity");

    const Layout pos = compute_layout(Algorithm::fr, ds.graph, lc);
    KMeansConfig kc;
    kc.seed = 4;
    const auto base = score_layout(ds.truth, pos, kc);
    const std::array<Layout, 3> moved{similarity(pos, 1.1, false, 3.5, {-7, 2}), similarity(pos, 0.0, true, 1.0, {0, 0}),
                                      similarity(pos, 4.0, true, 0.02, {100, 100})};
    for (const Layout& q : moved) {
      const auto r = score_layout(ds.truth, q, kc);
      for (std::size_t m = 0; m < kMetricCount; ++m)
        if (std::abs(metric_value(r, m) - metric_value(base, m)) > 1e-12) broken.push_back("similarity invariance");
    }
  }

  std::set<std::string> kinds(broken.begin(), broken.end());
  std::string detail = "permutation, hom/cmp symmetry, k-means and SMACOF monotonicity, similarity invariance";
  if (!kinds.empty()) {
    detail = "violated:";
    for (const auto& k : kinds) detail += " " + k;
  }
  return {kinds.empty(), detail};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "cq_acceptance_determinism";
  fs::remove_all(dir);
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "cq");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  const std::string config = (kSource / "configs" / "compare_toy.json").string();
  if (run({"compare", "--config", config, "--out-dir", (dir / "first").string(), "--no-render"}) != 0)
    return {false, "initial compare run failed"};
  const std::string manifest = (dir / "first" / "manifest.json").string();
  const int a = run({"compare", "--config", manifest, "--out-dir", (dir / "a").string(), "--jobs", "1"});
  const int b = run({"compare", "--config", manifest, "--out-dir", (dir / "b").string(), "--jobs", "4"});
  if (a != 0 || b != 0) return {false, "rerun from manifest failed"};
  const std::string ca = read_file(dir / "a" / "results.csv"), cb = read_file(dir / "b" / "results.csv");
  const bool same = ca == cb && ca == read_file(dir / "first" / "results.csv");
  fs::remove_all(dir);
  return {same, fmt("two reruns from one manifest (1 and 4 jobs): results.csv %s (%zu bytes)",
                    same ? "byte-identical" : "differs", ca.size())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expect_fail.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail N]...\n");
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric oracles", metric_oracles},
      {"chance adjustment", chance_adjustment},
      {"EMI vs Monte-Carlo", emi_monte_carlo},
      {"perfect scores", perfect_scores},
      {"scores decrease under deformation", deformation_trend},
      {"sensitivity ordering", sensitivity_ordering},
      {"cluster-aware layouts score higher", layout_ranking},
      {"generator fidelity", generator_fidelity},
      {"pipeline invariances", pipeline_invariances},
      {"determinism", determinism},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::string note;
    if (!o.pass && expect_fail.count(id)) note = "  [expected]";
    if (o.pass && expect_fail.count(id)) note = "  [expected to fail, passed]";
    if (!o.pass && !expect_fail.count(id)) ++unexpected;
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), note.c_str());
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
