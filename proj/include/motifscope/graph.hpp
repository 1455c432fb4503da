#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace motifscope {

using NodeId = std::uint32_t;
using ExternalId = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Compressed sparse rows: neighbors of u are targets[offsets[u] .. offsets[u+1]).
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> row(NodeId u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }

  // Rows come out sorted when `pairs` is sorted by (row, col).
  static Csr from_sorted_pairs(std::size_t n, const std::vector<Edge>& pairs) {
    Csr c;
    c.offsets.assign(n + 1, 0);
    for (const auto& [r, t] : pairs) ++c.offsets[r + 1];
    for (std::size_t i = 0; i < n; ++i) c.offsets[i + 1] += c.offsets[i];
    c.targets.resize(pairs.size());
    std::vector<std::size_t> fill(c.offsets.begin(), c.offsets.end() - 1);
    for (const auto& [r, t] : pairs) c.targets[fill[r]++] = t;
    return c;
  }
};

inline bool sorted_contains(std::span<const NodeId> row, NodeId v) {
  return std::binary_search(row.begin(), row.end(), v);
}

}  // namespace detail

/// Simple directed graph over compacted ids 0..node_count-1.
///
/// Immutable after construction. Out and in adjacency rows are sorted so
/// edge queries are a binary search. `external_id(u)` gives the id the node
/// carried in the input file.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds from compacted edges. Edges must be free of self-loops and
  /// duplicates; `ids` (if non-empty) must have `node_count` entries.
  DirectedGraph(std::size_t node_count, std::vector<Edge> edges,
                std::vector<ExternalId> ids = {})
      : node_count_(node_count), edges_(std::move(edges)), ids_(std::move(ids)) {
    if (ids_.empty()) {
      ids_.resize(node_count_);
      for (std::size_t i = 0; i < node_count_; ++i) ids_[i] = static_cast<ExternalId>(i);
    }
    if (ids_.size() != node_count_) throw GraphError("id map size does not match node count");
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [u, v] = edges_[i];
      if (u >= node_count_ || v >= node_count_) throw GraphError("edge endpoint out of range");
      if (u == v) throw GraphError("self-loop in compacted edge list");
      if (i > 0 && edges_[i - 1] == edges_[i]) throw GraphError("duplicate edge in compacted edge list");
    }
    out_ = detail::Csr::from_sorted_pairs(node_count_, edges_);
    std::vector<Edge> reversed;
    reversed.reserve(edges_.size());
    for (const auto& [u, v] : edges_) reversed.emplace_back(v, u);
    std::sort(reversed.begin(), reversed.end());
    in_ = detail::Csr::from_sorted_pairs(node_count_, reversed);
    index_.reserve(node_count_);
    for (std::size_t i = 0; i < node_count_; ++i) {
      if (!index_.emplace(ids_[i], static_cast<NodeId>(i)).second)
        throw GraphError("id map is not a bijection");
    }
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Edges sorted by (from, to).
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> out_neighbors(NodeId u) const { return out_.row(u); }
  std::span<const NodeId> in_neighbors(NodeId u) const { return in_.row(u); }
  std::size_t out_degree(NodeId u) const { return out_.row(u).size(); }
  std::size_t in_degree(NodeId u) const { return in_.row(u).size(); }

  bool has_edge(NodeId u, NodeId v) const { return detail::sorted_contains(out_.row(u), v); }

  ExternalId external_id(NodeId u) const { return ids_[u]; }
  const std::vector<ExternalId>& id_map() const { return ids_; }
  const NodeId* find(ExternalId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &it->second;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<ExternalId> ids_;
  std::unordered_map<ExternalId, NodeId> index_;
  detail::Csr out_;
  detail::Csr in_;
};

struct BuildResult {
  DirectedGraph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Compacts external ids in first-appearance order, dropping self-loops and
/// repeated edges.
inline BuildResult build_from_edges(const std::vector<std::pair<ExternalId, ExternalId>>& pairs) {
  if (pairs.empty()) throw GraphError("empty edge list");
  std::unordered_map<ExternalId, NodeId> index;
  std::vector<ExternalId> ids;
  auto compact = [&](ExternalId x) {
    if (x < 0) throw GraphError("negative node id " + std::to_string(x));
    auto [it, inserted] = index.emplace(x, static_cast<NodeId>(ids.size()));
    if (inserted) ids.push_back(x);
    return it->second;
  };
  BuildResult out;
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const NodeId u = compact(a);
    const NodeId v = compact(b);
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  out.duplicates_dropped = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  const std::size_t n = ids.size();
  out.graph = DirectedGraph(n, std::move(edges), std::move(ids));
  return out;
}

/// Subgraph induced by `nodes`; node i of the result is nodes[i] and keeps
/// its external id.
inline DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const NodeId> nodes) {
  std::unordered_map<NodeId, NodeId> local;
  local.reserve(nodes.size());
  std::vector<ExternalId> ids;
  ids.reserve(nodes.size());
  for (NodeId u : nodes) {
    if (!local.emplace(u, static_cast<NodeId>(ids.size())).second)
      throw GraphError("duplicate node in induced subgraph request");
    ids.push_back(g.external_id(u));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId v : g.out_neighbors(nodes[i])) {
      if (auto it = local.find(v); it != local.end()) edges.emplace_back(static_cast<NodeId>(i), it->second);
    }
  }
  return DirectedGraph(nodes.size(), std::move(edges), std::move(ids));
}

/// Undirected simple graph: union of in/out neighbors, deduplicated.
///
/// Usually obtained from a DirectedGraph; `source()` is null when built
/// directly from undirected edges.
class UndirectedView {
 public:
  UndirectedView() = default;

  static UndirectedView of(const DirectedGraph& g) {
    std::vector<Edge> pairs;
    pairs.reserve(2 * g.edge_count());
    for (const auto& [u, v] : g.edges()) {
      pairs.emplace_back(u, v);
      pairs.emplace_back(v, u);
    }
    UndirectedView view = from_pairs(g.node_count(), std::move(pairs));
    view.source_ = &g;
    return view;
  }

  /// Builds from undirected edges {u,v}; self-loops and repeats are dropped.
  static UndirectedView from_edges(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<Edge> pairs;
    pairs.reserve(2 * edges.size());
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw GraphError("edge endpoint out of range");
      if (u == v) continue;
      pairs.emplace_back(u, v);
      pairs.emplace_back(v, u);
    }
    return from_pairs(n, std::move(pairs));
  }

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Undirected edges as (u, v) with u < v, sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId u) const { return adj_.row(u); }
  std::size_t degree(NodeId u) const { return adj_.row(u).size(); }
  bool adjacent(NodeId u, NodeId v) const { return detail::sorted_contains(adj_.row(u), v); }
  const DirectedGraph* source() const { return source_; }

  /// Index of edge {u,v} in edges(), or -1.
  std::ptrdiff_t edge_index(NodeId u, NodeId v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) return -1;
    return it - edges_.begin();
  }

 private:
  static UndirectedView from_pairs(std::size_t n, std::vector<Edge> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    UndirectedView view;
    view.n_ = n;
    view.adj_ = detail::Csr::from_sorted_pairs(n, pairs);
    for (const auto& [u, v] : pairs)
      if (u < v) view.edges_.emplace_back(u, v);
    return view;
  }

  std::size_t n_ = 0;
  detail::Csr adj_;
  std::vector<Edge> edges_;
  const DirectedGraph* source_ = nullptr;
};

inline UndirectedView undirected_projection(const DirectedGraph& g) { return UndirectedView::of(g); }

/// Adjacency of a k-node tuple as k*(k-1) bits, one per ordered pair (i,j),
/// i != j, row-major with the diagonal skipped:
///   bit(i,j) = i*(k-1) + (j < i ? j : j-1)
struct AdjacencyBitmask {
  std::uint8_t k = 0;
  std::uint16_t bits = 0;

  static constexpr unsigned position(unsigned k, unsigned i, unsigned j) {
    return i * (k - 1) + (j < i ? j : j - 1);
  }
  bool test(unsigned i, unsigned j) const { return (bits >> position(k, i, j)) & 1u; }
  void set(unsigned i, unsigned j) { bits = static_cast<std::uint16_t>(bits | (1u << position(k, i, j))); }
  unsigned pair_count() const { return static_cast<unsigned>(k) * (k - 1u); }
  unsigned edge_count() const { return static_cast<unsigned>(__builtin_popcount(bits)); }
  unsigned in_degree(unsigned j) const {
    unsigned d = 0;
    for (unsigned i = 0; i < k; ++i)
      if (i != j && test(i, j)) ++d;
    return d;
  }
  unsigned out_degree(unsigned i) const {
    unsigned d = 0;
    for (unsigned j = 0; j < k; ++j)
      if (i != j && test(i, j)) ++d;
    return d;
  }
  friend bool operator==(const AdjacencyBitmask&, const AdjacencyBitmask&) = default;
};

inline AdjacencyBitmask induced_bitmask(const DirectedGraph& g, std::span<const NodeId> nodes) {
  const std::size_t k = nodes.size();
  if (k < 2 || k > 4) throw GraphError("induced_bitmask supports 2..4 nodes");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (nodes[i] == nodes[j]) throw GraphError("duplicate node in tuple");
  AdjacencyBitmask b{static_cast<std::uint8_t>(k), 0};
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j)
      if (i != j && g.has_edge(nodes[i], nodes[j])) b.set(i, j);
  return b;
}

}  // namespace motifscope
