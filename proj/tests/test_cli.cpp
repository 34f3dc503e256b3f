#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace cq;

namespace {

const fs::path kSource = CQ_SOURCE_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cq");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("cq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string p(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
};

/// Clusters placed on far-apart grid cells.
std::string separated_layout(const ClusterLabeling& truth) {
  Layout pos(truth.size());
  for (Vertex v = 0; v < truth.size(); ++v)
    pos[v] = {100.0 * truth[v] + 0.01 * v, 0.02 * v};
  return write_layout(pos);
}

}  // namespace

TEST_F(Cli, GenerateWritesThreeFiles) {
  auto r = invoke({"generate", "--base", "complete", "--clusters", "9", "--size", "30", "--internal", "0.4",
                "--external", "0.01", "--seed", "3", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* ext : {".edges", ".labels", ".json"})
    EXPECT_TRUE(fs::exists(dir / (std::string("c-few-verydense-mid") + ext))) << ext;
  auto sidecar = Json::parse(read_file(dir / "c-few-verydense-mid.json"));
  EXPECT_EQ(sidecar["name"], "c-few-verydense-mid");
  EXPECT_EQ(sidecar["stats"]["vertices"], 270);
  EXPECT_EQ(sidecar["manifest"]["master_seed"], 3);

  const std::string first = read_file(dir / "c-few-verydense-mid.edges");
  ASSERT_EQ(invoke({"generate", "--base", "complete", "--clusters", "9", "--size", "30", "--seed", "3", "--out-dir",
                 dir.string(), "--name", "again"})
                .code,
            0);
  EXPECT_EQ(read_file(dir / "again.edges"), first);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  auto missing = invoke({"generate", "--clusters", "9", "--size", "30"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("--base"), std::string::npos);
  EXPECT_EQ(invoke({"generate", "--base", "hypercube", "--clusters", "9", "--size", "30", "--out-dir", dir.string()}).code,
            2);
  EXPECT_EQ(invoke({"generate", "--base", "complete", "--clusters", "9", "--out-dir", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"compare", "--config", p("nope.json")}).code, 2);
  write_file_atomic(dir / "bad.json", "{ not json");
  EXPECT_EQ(invoke({"compare", "--config", p("bad.json")}).code, 2);
  EXPECT_EQ(invoke({"--version"}).code, 0);
}

TEST_F(Cli, ScorePerfectLayoutAndDataErrors) {
  const fs::path edges = kSource / "data" / "toy.edges", labels = kSource / "data" / "toy.labels";
  const auto truth = load_labels(read_file(labels), load_edge_list(read_file(edges)).graph.vertex_count());
  write_file_atomic(dir / "perfect.layout", separated_layout(truth));
  auto r = invoke({"score", "--graph", edges.string(), "--labels", labels.string(), "--layout", p("perfect.layout")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = report_from_json(Json::parse(r.out));
  for (std::size_t m = 0; m < kMetricCount; ++m) EXPECT_NEAR(metric_value(report, m), 1.0, 1e-12);
  EXPECT_EQ(report.layout, "perfect");

  auto csv = invoke({"score", "--graph", edges.string(), "--labels", labels.string(), "--layout", p("perfect.layout"),
                  "--format", "csv"});
  EXPECT_EQ(csv.out.rfind(kCsvHeader, 0), 0u);

  // Drop the last vertex from the layout.
  std::string text = read_file(dir / "perfect.layout");
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  write_file_atomic(dir / "short.layout", text);
  auto miss = invoke({"score", "--graph", edges.string(), "--labels", labels.string(), "--layout", p("short.layout")});
  EXPECT_EQ(miss.code, 1);
  EXPECT_NE(miss.err.find("error:"), std::string::npos);

  write_file_atomic(dir / "few.labels", "0 0\n1 1\n");
  EXPECT_EQ(invoke({"score", "--graph", edges.string(), "--labels", p("few.labels"), "--layout", p("perfect.layout")}).code,
            1);
}

TEST_F(Cli, LayoutAndRender) {
  const fs::path edges = kSource / "data" / "toy.edges", labels = kSource / "data" / "toy.labels";
  ASSERT_EQ(invoke({"layout", "--graph", edges.string(), "--algorithm", "mds", "--out", p("toy.layout")}).code, 0);
  EXPECT_EQ(import_layout(read_file(dir / "toy.layout")).size(), 60u);
  EXPECT_EQ(invoke({"layout", "--graph", edges.string(), "--algorithm", "tsnet"}).code, 2);
  ASSERT_EQ(invoke({"render", "--graph", edges.string(), "--labels", labels.string(), "--layout", p("toy.layout"),
                 "--out", p("toy.svg")})
                .code,
            0);
  EXPECT_NE(read_file(dir / "toy.svg").find("<circle"), std::string::npos);
  EXPECT_EQ(invoke({"render", "--graph", edges.string(), "--out", p("x.svg")}).code, 2);
}

TEST_F(Cli, DeformToyHasElevenSteps) {
  auto r = invoke({"deform", "--config", (kSource / "configs" / "deform_toy.json").string(), "--out-dir", dir.string(),
                "--repetitions", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto results = Json::parse(read_file(dir / "results.json"));
  EXPECT_EQ(results["mode"], "deform");
  ASSERT_EQ(results["runs"].size(), 2u);
  EXPECT_EQ(results["runs"][0]["steps"].size(), 11u);
  EXPECT_EQ(results["mean"].size(), 11u);
  EXPECT_GT(results["mean"][0]["cq_ari"].get<double>(), results["mean"][10]["cq_ari"].get<double>());
  EXPECT_TRUE(fs::exists(dir / "chart_deformation.svg"));
  EXPECT_TRUE(fs::exists(dir / "toy_fr_step0.svg"));
  EXPECT_TRUE(fs::exists(dir / "toy_fr_step10.svg"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST_F(Cli, CompareToyHasSevenColumnsAndRerunsIdentically) {
  auto r = invoke({"compare", "--config", (kSource / "configs" / "compare_toy.json").string(), "--out-dir",
                (dir / "a").string(), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto results = Json::parse(read_file(dir / "a" / "results.json"));
  ASSERT_EQ(results["layouts"].size(), 7u);
  EXPECT_EQ(results["layouts"][6], "networkx-spring");
  EXPECT_EQ(r.out.rfind(kCsvHeader, 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "a" / "toy_networkx-spring.svg"));

  auto again = invoke({"compare", "--config", (dir / "a" / "manifest.json").string(), "--out-dir", (dir / "b").string(),
                    "--jobs", "3"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(read_file(dir / "a" / "results.csv"), read_file(dir / "b" / "results.csv"));
}

TEST_F(Cli, CompareReportsBrokenImportAsMissing) {
  write_file_atomic(dir / "broken.layout", "0 0 0\n1 nan 2\n");
  Json cfg = {{"mode", "compare"},
              {"datasets", Json::array({{{"name", "toy"},
                                          {"graph", (kSource / "data" / "toy.edges").string()},
                                          {"labels", (kSource / "data" / "toy.labels").string()}}})},
              {"layouts", Json::array({"mds", {{"name", "ext"}, {"files", {{"toy", p("broken.layout")}}}}})},
              {"render", {{"drawings", false}, {"charts", false}}}};
  write_file_atomic(dir / "cfg.json", cfg.dump());
  auto r = invoke({"compare", "--config", p("cfg.json"), "--out-dir", p("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_NE(read_file(dir / "o" / "results.csv").find("toy,ext,cq_ari,NA"), std::string::npos);
}

TEST_F(Cli, IngestRemapsAndKeepsLargestComponent) {
  write_file_atomic(dir / "raw.edges", "10 20\n20 30\n30 10\n500 600\n");
  write_file_atomic(dir / "raw.labels", "10 a1\n20 1\n30 1\n500 2\n600 2\n");
  EXPECT_EQ(invoke({"ingest", "--edges", p("raw.edges"), "--name", "x", "--out-dir", dir.string()}).code, 1);
  EXPECT_EQ(invoke({"ingest", "--edges", p("raw.edges"), "--labels", p("raw.labels"), "--remap", "--name", "x",
                 "--out-dir", dir.string()})
                .code,
            1);  // non-integer cluster id
  write_file_atomic(dir / "raw.labels", "10 7\n20 7\n30 8\n500 2\n600 2\n");
  auto r = invoke({"ingest", "--edges", p("raw.edges"), "--labels", p("raw.labels"), "--remap", "--lcc", "--name", "x",
                "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto g = load_edge_list(read_file(dir / "x.edges")).graph;
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(load_labels(read_file(dir / "x.labels"), 3).cluster_count(), 2u);
  EXPECT_EQ(load_id_map(read_file(dir / "x.ids")).original, (std::vector<std::int64_t>{10, 20, 30}));
}
