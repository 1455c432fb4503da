#pragma once

#include <random>
#include <utility>
#include <vector>

#include "motifscope/graph.hpp"

namespace motifscope::testing {

using EdgeList = std::vector<std::pair<ExternalId, ExternalId>>;

inline DirectedGraph make_graph(const EdgeList& edges) { return build_from_edges(edges).graph; }

/// Directed graph on exactly n nodes 0..n-1 (isolated nodes kept).
inline DirectedGraph graph_on(std::size_t n, const std::vector<Edge>& edges) { return DirectedGraph(n, edges); }

/// Each ordered pair (i, j), i != j, is an edge with probability p.
inline std::vector<Edge> random_digraph_edges(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && coin(rng)) edges.emplace_back(i, j);
  return edges;
}

inline DirectedGraph random_digraph(std::size_t n, double p, std::uint64_t seed) {
  return graph_on(n, random_digraph_edges(n, p, seed));
}

/// Undirected edges {u, v} (u < v), each with probability p.
inline std::vector<Edge> random_undirected_edges(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return edges;
}

/// Two cliques of `size` nodes (0..size-1 and size..2size-1), both
/// directions on every clique pair, joined by the bridge (size-1) -> size.
inline std::vector<Edge> two_cliques_with_bridge(NodeId size) {
  std::vector<Edge> edges;
  for (NodeId base : {NodeId{0}, size})
    for (NodeId i = 0; i < size; ++i)
      for (NodeId j = 0; j < size; ++j)
        if (i != j) edges.emplace_back(base + i, base + j);
  edges.emplace_back(size - 1, size);
  return edges;
}

/// Undirected: triangles {0,1,2} and {3,4,5} plus bridge {2,3}.
inline std::vector<Edge> two_triangles_with_bridge() { return {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}}; }

/// Zachary's karate club (34 nodes, 78 edges), 0-based.
inline std::vector<Edge> karate_club() {
  return {{0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},  {0, 11},
          {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},
          {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},
          {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
          {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33},
          {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29},
          {23, 32}, {23, 33}, {24, 25}, {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
          {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33}};
}

}  // namespace motifscope::testing
