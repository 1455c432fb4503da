#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "motifscope/cli.hpp"

using namespace motifscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "motifscope");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("motifscope_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    std::ofstream f(path("graph.txt"));
    f << "# Directed graph\n# FromNodeId\tToNodeId\n";
    for (const auto& [a, b] : motifscope::testing::random_digraph_edges(60, 0.06, 11)) f << a << '\t' << b << '\n';
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpExitsZeroEverywhere) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  for (const char* sub : {"stats", "catalog", "census", "metrics", "significance", "communities", "pipeline"}) {
    const auto r = invoke({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_FALSE(r.out.empty()) << sub;
  }
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({"census", path("graph.txt"), "--bogus"}).code, 1);
  EXPECT_EQ(invoke({"census", path("graph.txt"), "--k", "5"}).code, 1);
  EXPECT_EQ(invoke({"census", path("missing.txt")}).code, 1);
  EXPECT_EQ(invoke({"census", path("graph.txt")}).code, 1);
  EXPECT_EQ(invoke({"census", path("graph.txt"), "--k", "3", "--sample", "1,1"}).code, 1);
  EXPECT_EQ(invoke({"census", path("graph.txt"), "--k", "3", "--sample", "1,1,0"}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
}

TEST_F(CliTest, MalformedInputExitsTwo) {
  std::ofstream(path("bad.txt")) << "1 2\n3 four\n";
  const auto r = invoke({"census", path("bad.txt"), "--k", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  std::ofstream(path("empty.txt")) << "# nothing\n";
  EXPECT_EQ(invoke({"stats", path("empty.txt")}).code, 2);
}

TEST_F(CliTest, CensusCsvHasOneRowPerTriadClass) {
  const auto r = invoke({"census", path("graph.txt"), "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 14u);
  EXPECT_EQ(l[0], "class_id,k,edges,count,frequency_fraction");
}

TEST_F(CliTest, HistogramFileForTetrads) {
  const auto r = invoke({"census", path("graph.txt"), "--k", "4", "--hist", path("hist.csv"), "-o", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(slurp(path("hist.csv")));
  ASSERT_EQ(l.size(), 200u);
  EXPECT_EQ(l[0], "class_id,count");
  EXPECT_EQ(l[1].rfind("1,", 0), 0u);
  EXPECT_EQ(l[199].rfind("199,", 0), 0u);
}

TEST_F(CliTest, RepeatRunsAndThreadCountsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"census", path("graph.txt"), "--k", "4"},
      {"census", path("graph.txt"), "--k", "3", "--sample", "1,1,0.5", "--seed", "3"},
      {"significance", path("graph.txt"), "--k", "3", "--ensembles", "6"},
      {"communities", path("graph.txt"), "--algo", "gn"},
      {"pipeline", path("graph.txt"), "--max-size", "20"},
      {"stats", path("graph.txt"), "--sources", "30"},
  };
  for (const auto& cmd : commands) {
    auto one = cmd, four = cmd;
    one.insert(one.begin(), {"--threads", "1"});
    four.insert(four.begin(), {"--threads", "4"});
    const auto a = invoke(one), b = invoke(one), c = invoke(four);
    ASSERT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd[0];
    EXPECT_EQ(a.out, c.out) << cmd[0];
  }
}

TEST_F(CliTest, EmptyCensusIsHeaderOnly) {
  std::ofstream(path("pair.txt")) << "1 2\n";
  const auto r = invoke({"census", path("pair.txt"), "--k", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "class_id,k,edges,count,frequency_fraction\n");
}

TEST_F(CliTest, CatalogAndMetricsJson) {
  const auto cat = invoke({"catalog", "--k", "4", "--out", "json"});
  ASSERT_EQ(cat.code, 0);
  EXPECT_EQ(nlohmann::json::parse(cat.out)["classes"].size(), 199u);
  const auto met = invoke({"metrics", "--k", "3", "--out", "json"});
  ASSERT_EQ(met.code, 0);
  EXPECT_EQ(nlohmann::json::parse(met.out)["classes"].size(), 13u);
}

TEST_F(CliTest, StatsWritesJsonSummary) {
  const auto r = invoke({"stats", path("graph.txt"), "--exact-diameter", "--json", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("s.json")));
  EXPECT_EQ(j["nodes"], 60);
  EXPECT_NE(r.out.find("Nodes"), std::string::npos);
}

TEST_F(CliTest, PipelineReadsMetadata) {
  std::ofstream m(path("meta.txt"));
  m << "# Full information about Amazon Share the Love products\nTotal items: 2\n\n";
  for (int id : {0, 1}) {
    m << "Id:   " << id << "\nASIN: 00000000" << id << "\n  title: Item " << id << "\n  group: Book\n"
      << "  salesrank: 10\n  similar: 0\n  categories: 0\n  reviews: total: 0  downloaded: 0  avg rating: 0\n\n";
  }
  m.close();
  std::ofstream(path("g.txt")) << "0 1\n1 2\n2 0\n";
  const auto r = invoke({"pipeline", path("g.txt"), "--meta", path("meta.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["communities"].size(), 1u);
  EXPECT_EQ(j["communities"][0]["label"], "Book");
}
