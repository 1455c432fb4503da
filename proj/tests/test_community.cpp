#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "motifscope/community.hpp"
#include "oracles.hpp"

using namespace motifscope;
using namespace motifscope::testing;

namespace {

void expect_betweenness_matches_oracle(std::size_t n, const std::vector<Edge>& edges) {
  const auto u = UndirectedView::from_edges(n, edges);
  const auto b = edge_betweenness(u, 2);
  const auto o = oracle::edge_betweenness(oracle::undirected_matrix(n, edges));
  ASSERT_EQ(o.size(), u.edge_count());
  for (std::size_t e = 0; e < u.edge_count(); ++e) EXPECT_NEAR(b[e], o.at(u.edges()[e]), 1e-9);
}

// Undirected two-cliques-plus-bridge on nodes 0..2s-1.
std::vector<Edge> undirected_cliques(NodeId s) {
  std::vector<Edge> e;
  for (NodeId base : {NodeId{0}, s})
    for (NodeId i = 0; i < s; ++i)
      for (NodeId j = i + 1; j < s; ++j) e.emplace_back(base + i, base + j);
  e.emplace_back(s - 1, s);
  return e;
}

std::vector<std::uint32_t> halves(std::size_t n) {
  std::vector<std::uint32_t> a(n, 0);
  for (std::size_t i = n / 2; i < n; ++i) a[i] = 1;
  return a;
}

}  // namespace

TEST(Betweenness, PathOfThree) {
  const auto u = UndirectedView::from_edges(3, {{0, 1}, {1, 2}});
  const auto b = edge_betweenness(u, 1);
  EXPECT_DOUBLE_EQ(b[0], 2.0);
  EXPECT_DOUBLE_EQ(b[1], 2.0);
}

TEST(Betweenness, TriangleIsSymmetric) {
  const auto b = edge_betweenness(UndirectedView::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), 1);
  EXPECT_DOUBLE_EQ(b[0], b[1]);
  EXPECT_DOUBLE_EQ(b[1], b[2]);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
}

TEST(Betweenness, BridgeBetweenFourCliquesIsMaximal) {
  const auto edges = undirected_cliques(4);
  const auto u = UndirectedView::from_edges(8, edges);
  const auto b = edge_betweenness(u, 1);
  const auto bridge = static_cast<std::size_t>(u.edge_index(3, 4));
  for (std::size_t e = 0; e < b.size(); ++e)
    if (e != bridge) EXPECT_GT(b[bridge], b[e]);
  EXPECT_DOUBLE_EQ(b[bridge], 16.0);
  expect_betweenness_matches_oracle(8, edges);
}

TEST(Betweenness, MatchesOracleOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const std::size_t n = 10 + seed * 2;
    expect_betweenness_matches_oracle(n, random_undirected_edges(n, 0.15, seed));
  }
  expect_betweenness_matches_oracle(34, karate_club());
}

TEST(Betweenness, ThreadCountDoesNotChangeValues) {
  const auto u = UndirectedView::from_edges(34, karate_club());
  EXPECT_EQ(edge_betweenness(u, 1), edge_betweenness(u, 3));
}

TEST(Modularity, SingleCommunityIsZero) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 5 + seed;
    const auto u = UndirectedView::from_edges(n, random_undirected_edges(n, 0.3, seed));
    EXPECT_EQ(modularity(u, std::vector<std::uint32_t>(n, 0)), 0.0);
  }
}

TEST(Modularity, TwoDisconnectedCliquesGiveHalf) {
  std::vector<Edge> e;
  for (NodeId base : {NodeId{0}, NodeId{4}})
    for (NodeId i = 0; i < 4; ++i)
      for (NodeId j = i + 1; j < 4; ++j) e.emplace_back(base + i, base + j);
  EXPECT_DOUBLE_EQ(modularity(UndirectedView::from_edges(8, e), halves(8)), 0.5);
}

TEST(Modularity, MatchesMatrixFormula) {
  std::mt19937 rng(4);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 12;
    const auto edges = random_undirected_edges(n, 0.3, seed);
    std::vector<std::uint32_t> a(n);
    for (auto& x : a) x = rng() % 4;
    EXPECT_NEAR(modularity(UndirectedView::from_edges(n, edges), a),
                oracle::modularity(oracle::undirected_matrix(n, edges), a), 1e-12);
  }
}

TEST(GirvanNewman, TwoTrianglesRemovesBridgeFirst) {
  const auto u = UndirectedView::from_edges(6, two_triangles_with_bridge());
  const auto r = girvan_newman(u);
  ASSERT_FALSE(r.dendrogram.steps.empty());
  EXPECT_EQ(r.dendrogram.steps[0].removed, (Edge{2, 3}));
  EXPECT_EQ(r.partition.assignment, (std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(r.dendrogram.best_cut, 1u);
}

TEST(GirvanNewman, SingleEdge) {
  const auto r = girvan_newman(UndirectedView::from_edges(2, {{0, 1}}));
  ASSERT_EQ(r.dendrogram.steps.size(), 1u);
  EXPECT_EQ(r.dendrogram.steps[0].components, 2u);
  GirvanNewmanOptions opt;
  opt.target_communities = 2;
  EXPECT_EQ(girvan_newman(UndirectedView::from_edges(2, {{0, 1}}), opt).partition.community_count, 2u);
}

TEST(GirvanNewman, KarateBestCutAbovePointThree) {
  const auto u = UndirectedView::from_edges(34, karate_club());
  const auto r = girvan_newman(u);
  EXPECT_GT(r.partition.modularity, 0.3);
  EXPECT_NEAR(r.partition.modularity, oracle::modularity(oracle::undirected_matrix(34, karate_club()), r.partition.assignment),
              1e-12);
}

TEST(GirvanNewman, DendrogramInvariants) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 20;
    const auto u = UndirectedView::from_edges(n, random_undirected_edges(n, 0.2, seed));
    const auto r = girvan_newman(u);
    const auto& d = r.dendrogram;
    EXPECT_EQ(d.steps.size(), u.edge_count());
    std::size_t prev = d.initial_components;
    double best = d.initial_modularity;
    for (const auto& s : d.steps) {
      EXPECT_GE(s.components, prev);
      prev = s.components;
      best = std::max(best, s.modularity);
    }
    const double at_cut = d.best_cut == 0 ? d.initial_modularity : d.steps[d.best_cut - 1].modularity;
    EXPECT_EQ(at_cut, best);
    EXPECT_NEAR(r.partition.modularity, best, 1e-12);
  }
}

TEST(GirvanNewman, RecoversTwoFiveCliques) {
  const auto u = UndirectedView::from_edges(10, undirected_cliques(5));
  EXPECT_EQ(girvan_newman(u).partition.assignment, halves(10));
}

TEST(Cnm, RecoversTwoFiveCliques) {
  const auto u = UndirectedView::from_edges(10, undirected_cliques(5));
  const auto r = cnm_greedy(u);
  EXPECT_EQ(r.partition.assignment, halves(10));
  // The split beats every partition one node move away.
  const double q = modularity(u, r.partition);
  for (NodeId v = 0; v < 10; ++v) {
    auto moved = r.partition.assignment;
    moved[v] ^= 1u;
    EXPECT_GT(q, modularity(u, moved));
  }
}

TEST(Cnm, EdgelessGraphStaysSingletons) {
  const auto r = cnm_greedy(UndirectedView::from_edges(5, {}));
  EXPECT_EQ(r.partition.community_count, 5u);
  EXPECT_TRUE(r.merges.empty());
}

TEST(Cnm, NeverBelowSingletonStart) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 30;
    const auto u = UndirectedView::from_edges(n, random_undirected_edges(n, 0.12, seed));
    std::vector<std::uint32_t> singletons(n);
    for (std::uint32_t i = 0; i < n; ++i) singletons[i] = i;
    const auto r = cnm_greedy(u);
    EXPECT_GE(r.partition.modularity, modularity(u, singletons));
    if (!r.merges.empty()) EXPECT_NEAR(r.merges.back().modularity, r.partition.modularity, 1e-9);
  }
}

TEST(Cnm, CloseToExhaustiveOptimumOnSmallGraphs) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 5 + seed % 4;
    const auto edges = random_undirected_edges(n, 0.4, seed);
    const auto u = UndirectedView::from_edges(n, edges);
    const double best = oracle::max_modularity(oracle::undirected_matrix(n, edges));
    EXPECT_GE(cnm_greedy(u).partition.modularity, best - 0.05) << "seed " << seed;
  }
}

TEST(Cnm, KarateModularity) {
  const auto u = UndirectedView::from_edges(34, karate_club());
  EXPECT_GT(cnm_greedy(u).partition.modularity, 0.37);
}

TEST(Pipeline, SmallGraphIsOneCommunity) {
  const auto g = graph_on(10, two_cliques_with_bridge(5));
  PipelineOptions opt;
  opt.max_community_size = 10;
  const auto rep = community_pipeline(g, {}, opt);
  ASSERT_EQ(rep.communities.size(), 1u);
  EXPECT_EQ(rep.communities[0].census.counts, census(g, 3, 1).counts);
  EXPECT_EQ(rep.communities[0].label, "unlabeled");
  EXPECT_DOUBLE_EQ(rep.communities[0].label_share, 1.0);
}

TEST(Pipeline, SplitsTwoCliquesWithEitherAlgorithm) {
  const auto g = graph_on(10, two_cliques_with_bridge(5));
  const auto whole = census(g, 3, 1);
  for (auto algo : {CommunityAlgorithm::girvan_newman, CommunityAlgorithm::cnm}) {
    PipelineOptions opt;
    opt.algo = algo;
    opt.max_community_size = 6;
    const auto rep = community_pipeline(g, {}, opt);
    ASSERT_EQ(rep.communities.size(), 2u);
    std::size_t total = 0;
    std::vector<std::uint64_t> summed(whole.counts.size(), 0);
    for (const auto& c : rep.communities) {
      total += c.nodes.size();
      EXPECT_EQ(c.census.counts, census(induced_subgraph(g, c.nodes), 3, 1).counts);
      for (std::size_t i = 0; i < summed.size(); ++i) summed[i] += c.census.counts[i];
      EXPECT_FALSE(c.indivisible);
    }
    EXPECT_EQ(total, 10u);
    const ClassId conv = alias_to_class(4);
    EXPECT_LE(summed[conv - 1], whole.count(conv));
    for (std::size_t i = 0; i < summed.size(); ++i) EXPECT_LE(summed[i], whole.counts[i]);
  }
}

TEST(Pipeline, MajorityLabel) {
  // One 12-node community: 10 books, 2 DVDs.
  std::vector<Edge> e;
  for (NodeId i = 0; i < 12; ++i) e.emplace_back(i, (i + 1) % 12);
  const auto g = graph_on(12, e);
  std::unordered_map<ExternalId, std::string> labels;
  for (ExternalId i = 0; i < 12; ++i) labels[i] = i < 10 ? "Book" : "DVD";
  PipelineOptions opt;
  opt.max_community_size = 12;
  const auto rep = community_pipeline(g, labels, opt);
  ASSERT_EQ(rep.communities.size(), 1u);
  EXPECT_EQ(rep.communities[0].label, "Book");
  EXPECT_DOUBLE_EQ(rep.communities[0].label_share, 10.0 / 12.0);
}

TEST(Pipeline, IndivisibleCommunityFlagged) {
  // A 6-clique has no modularity-improving split.
  std::vector<Edge> e;
  for (NodeId i = 0; i < 6; ++i)
    for (NodeId j = 0; j < 6; ++j)
      if (i != j) e.emplace_back(i, j);
  const auto g = graph_on(6, e);
  for (auto algo : {CommunityAlgorithm::girvan_newman, CommunityAlgorithm::cnm}) {
    PipelineOptions opt;
    opt.algo = algo;
    opt.max_community_size = 4;
    const auto rep = community_pipeline(g, {}, opt);
    ASSERT_EQ(rep.communities.size(), 1u);
    EXPECT_TRUE(rep.communities[0].indivisible);
  }
}

TEST(Pipeline, SizesSumAndRespectLimit) {
  const std::size_t n = 120;
  const auto g = random_digraph(n, 0.03, 8);
  for (auto algo : {CommunityAlgorithm::girvan_newman, CommunityAlgorithm::cnm}) {
    PipelineOptions opt;
    opt.algo = algo;
    opt.max_community_size = 25;
    const auto rep = community_pipeline(g, {}, opt);
    std::size_t total = 0;
    for (const auto& c : rep.communities) {
      total += c.nodes.size();
      EXPECT_TRUE(c.nodes.size() <= 25 || c.indivisible);
    }
    EXPECT_EQ(total, n);
  }
}

TEST(Pipeline, RejectsTooSmallMaxSize) {
  PipelineOptions opt;
  opt.max_community_size = 2;
  EXPECT_THROW(community_pipeline(graph_on(3, {{0, 1}, {1, 2}}), {}, opt), GraphError);
}
