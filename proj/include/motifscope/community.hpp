#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "motifscope/graph.hpp"
#include "motifscope/ingest.hpp"
#include "motifscope/metrics.hpp"
#include "motifscope/motif.hpp"
#include "motifscope/parallel.hpp"

namespace motifscope {

/// Community assignment over nodes 0..n-1. Communities are numbered by their
/// smallest member.
struct Partition {
  std::vector<std::uint32_t> assignment;
  std::size_t community_count = 0;
  double modularity = 0.0;

  std::vector<std::vector<NodeId>> communities() const {
    std::vector<std::vector<NodeId>> out(community_count);
    for (NodeId v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
    return out;
  }
};

/// Renumbers arbitrary labels so community ids follow smallest-member order.
inline Partition normalize_partition(const std::vector<std::uint32_t>& labels) {
  Partition p;
  p.assignment.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = remap.emplace(labels[v], static_cast<std::uint32_t>(remap.size()));
    p.assignment[v] = it->second;
  }
  p.community_count = remap.size();
  return p;
}

/// Q = sum_c (e_cc/m - (d_c/2m)^2). Zero for an edgeless graph.
inline double modularity(const UndirectedView& u, const std::vector<std::uint32_t>& assignment) {
  if (assignment.size() != u.node_count()) throw GraphError("assignment size does not match graph");
  const double m = static_cast<double>(u.edge_count());
  if (m == 0) return 0.0;
  std::unordered_map<std::uint32_t, std::pair<double, double>> per;  // intra edges, degree sum
  for (const auto& [a, b] : u.edges())
    if (assignment[a] == assignment[b]) per[assignment[a]].first += 1.0;
  for (NodeId v = 0; v < u.node_count(); ++v) per[assignment[v]].second += static_cast<double>(u.degree(v));
  // Sum in community-id order so the result does not depend on hash layout.
  std::map<std::uint32_t, std::pair<double, double>> ordered(per.begin(), per.end());
  double q = 0.0;
  for (const auto& [c, s] : ordered) {
    const double frac = s.second / (2.0 * m);
    q += s.first / m - frac * frac;
  }
  return q;
}

inline double modularity(const UndirectedView& u, const Partition& p) { return modularity(u, p.assignment); }

namespace detail {

// Undirected graph with removable edges, for betweenness and Girvan-Newman.
struct EdgeGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;  // (u < v), index = edge id
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adj;
  std::vector<char> alive;

  explicit EdgeGraph(const UndirectedView& u) : n(u.node_count()), edges(u.edges()), adj(n), alive(edges.size(), 1) {
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
      adj[edges[e].first].emplace_back(edges[e].second, e);
      adj[edges[e].second].emplace_back(edges[e].first, e);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
  }

  std::vector<std::uint32_t> component_labels(std::size_t* count = nullptr) const {
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(n, unset);
    std::vector<NodeId> queue;
    std::uint32_t next = 0;
    for (NodeId s = 0; s < n; ++s) {
      if (label[s] != unset) continue;
      label[s] = next;
      queue.assign(1, s);
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (const auto& [w, e] : adj[queue[h]])
          if (alive[e] && label[w] == unset) {
            label[w] = next;
            queue.push_back(w);
          }
      ++next;
    }
    if (count) *count = next;
    return label;
  }

  std::vector<NodeId> reachable(NodeId s) const {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> out{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < out.size(); ++h)
      for (const auto& [w, e] : adj[out[h]])
        if (alive[e] && !seen[w]) {
          seen[w] = 1;
          out.push_back(w);
        }
    return out;
  }
};

// Brandes single-source pass; adds the source's dependency to `acc`.
struct BrandesScratch {
  std::vector<std::int64_t> dist;
  std::vector<double> sigma, delta;
  std::vector<NodeId> order;

  void accumulate(const EdgeGraph& g, NodeId s, std::vector<double>& acc) {
    if (dist.size() != g.n) {
      dist.assign(g.n, -1);
      sigma.assign(g.n, 0.0);
      delta.assign(g.n, 0.0);
    }
    order.clear();
    order.push_back(s);
    dist[s] = 0;
    sigma[s] = 1.0;
    for (std::size_t h = 0; h < order.size(); ++h) {
      const NodeId v = order[h];
      for (const auto& [w, e] : g.adj[v]) {
        if (!g.alive[e]) continue;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t h = order.size(); h-- > 0;) {
      const NodeId w = order[h];
      for (const auto& [v, e] : g.adj[w]) {
        if (!g.alive[e] || dist[v] != dist[w] - 1) continue;
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        acc[e] += c;
        delta[v] += c;
      }
    }
    for (NodeId v : order) {
      dist[v] = -1;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
  }
};

// Sums source contributions in fixed blocks, then blocks in order, so the
// floating-point result is the same for any thread count.
inline void betweenness_from_sources(const EdgeGraph& g, const std::vector<NodeId>& sources, std::vector<double>& acc,
                                     unsigned threads) {
  constexpr std::size_t kBlocks = 16;
  const std::size_t blocks = std::min(kBlocks, sources.size());
  if (blocks == 0) return;
  const std::size_t per = (sources.size() + blocks - 1) / blocks;
  std::vector<std::vector<double>> partial(blocks);
  std::vector<BrandesScratch> scratch(std::max(1u, threads));
  parallel_for(blocks, threads, [&](unsigned w, std::size_t b) {
    auto& part = partial[b];
    part.assign(g.edges.size(), 0.0);
    const std::size_t lo = b * per, hi = std::min(sources.size(), lo + per);
    for (std::size_t i = lo; i < hi; ++i) scratch[w].accumulate(g, sources[i], part);
  });
  for (const auto& part : partial)
    for (std::size_t e = 0; e < acc.size(); ++e) acc[e] += part[e] / 2.0;
}

}  // namespace detail

/// Shortest-path edge betweenness (Brandes), each unordered pair counted
/// once. Indexed like u.edges().
inline std::vector<double> edge_betweenness(const UndirectedView& u, unsigned threads = 0) {
  const detail::EdgeGraph g(u);
  std::vector<double> acc(g.edges.size(), 0.0);
  std::vector<NodeId> sources(g.n);
  for (NodeId v = 0; v < g.n; ++v) sources[v] = v;
  detail::betweenness_from_sources(g, sources, acc, resolve_threads(threads));
  return acc;
}

struct DendrogramStep {
  Edge removed;
  std::size_t components = 0;
  double modularity = 0.0;
};

struct Dendrogram {
  std::size_t initial_components = 0;
  double initial_modularity = 0.0;
  std::vector<DendrogramStep> steps;
  std::size_t best_cut = 0;  // number of removals at the best-Q state
};

struct GirvanNewmanResult {
  Dendrogram dendrogram;
  Partition partition;
};

struct GirvanNewmanOptions {
  /// Stop once this many components exist and return that state; otherwise
  /// remove every edge and return the best-Q state.
  std::optional<std::size_t> target_communities;
  /// Stop at the first removal that increases the component count.
  bool first_split_only = false;
  unsigned threads = 0;
};

/// Repeatedly removes the edge of highest betweenness (ties within 1e-9
/// relative go to the lexicographically smallest edge) and records
/// modularity of the resulting components against the original graph.
inline GirvanNewmanResult girvan_newman(const UndirectedView& u, const GirvanNewmanOptions& opt = {}) {
  if (u.node_count() == 0) throw GraphError("girvan_newman needs a nonempty graph");
  const unsigned threads = resolve_threads(opt.threads);
  detail::EdgeGraph g(u);
  GirvanNewmanResult out;
  auto& d = out.dendrogram;

  std::size_t comps = 0;
  auto labels = g.component_labels(&comps);
  d.initial_components = comps;
  d.initial_modularity = modularity(u, labels);
  double best_q = d.initial_modularity;
  auto best_labels = labels;

  auto done = [&] {
    if (opt.target_communities && comps >= *opt.target_communities) return true;
    if (opt.first_split_only && comps > d.initial_components) return true;
    return false;
  };

  std::vector<double> bet(g.edges.size(), 0.0);
  {
    std::vector<NodeId> all(g.n);
    for (NodeId v = 0; v < g.n; ++v) all[v] = v;
    detail::betweenness_from_sources(g, all, bet, threads);
  }
  std::size_t alive = g.edges.size();

  while (alive > 0 && !done()) {
    std::uint32_t pick = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
      if (!g.alive[e]) continue;
      if (pick == std::numeric_limits<std::uint32_t>::max()) {
        pick = e;
        continue;
      }
      const double tol = 1e-9 * std::max(1.0, std::abs(bet[pick]));
      if (bet[e] > bet[pick] + tol) pick = e;  // edges are sorted, so ties keep the smaller one
    }
    const auto [a, b] = g.edges[pick];
    g.alive[pick] = 0;
    --alive;

    // Only the component(s) containing the removed edge change.
    auto touched = g.reachable(a);
    if (std::find(touched.begin(), touched.end(), b) == touched.end()) {
      ++comps;
      const auto other = g.reachable(b);
      touched.insert(touched.end(), other.begin(), other.end());
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId v : touched)
      for (const auto& [w, e] : g.adj[v]) bet[e] = 0.0;
    detail::betweenness_from_sources(g, touched, bet, threads);

    labels = g.component_labels();
    const double q = modularity(u, labels);
    d.steps.push_back({{a, b}, comps, q});
    if (q > best_q) {
      best_q = q;
      best_labels = labels;
      d.best_cut = d.steps.size();
    }
  }

  const bool stopped_early = opt.target_communities || opt.first_split_only;
  out.partition = normalize_partition(stopped_early ? labels : best_labels);
  out.partition.modularity = modularity(u, out.partition);
  return out;
}

struct MergeStep {
  std::uint32_t absorbed = 0;  // community merged away (by original node id)
  std::uint32_t into = 0;
  double delta_q = 0.0;
  double modularity = 0.0;
};

struct CnmResult {
  Partition partition;
  std::vector<MergeStep> merges;
};

/// Greedy modularity agglomeration (Clauset-Newman-Moore). Starts from
/// singletons and merges the adjacent pair with the largest positive dQ;
/// ties go to the smallest (id, id) pair.
inline CnmResult cnm_greedy(const UndirectedView& u) {
  const std::size_t n = u.node_count();
  if (n == 0) throw GraphError("cnm_greedy needs a nonempty graph");
  CnmResult out;
  std::vector<std::uint32_t> parent(n);
  for (std::uint32_t v = 0; v < n; ++v) parent[v] = v;

  const double m = static_cast<double>(u.edge_count());
  if (m == 0) {
    out.partition = normalize_partition(parent);
    return out;
  }

  std::vector<double> a(n);
  double q = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    a[v] = static_cast<double>(u.degree(v)) / (2.0 * m);
    q -= a[v] * a[v];
  }
  // dq[i][j] for adjacent communities; heap holds (-dq, i, j) with i < j.
  std::vector<std::map<std::uint32_t, double>> dq(n);
  std::set<std::tuple<double, std::uint32_t, std::uint32_t>> heap;
  for (const auto& [x, y] : u.edges()) {
    const double v = 2.0 * (1.0 / (2.0 * m) - a[x] * a[y]);
    dq[x][y] = v;
    dq[y][x] = v;
    heap.emplace(-v, x, y);
  }
  auto set_dq = [&](std::uint32_t i, std::uint32_t j, double v) {
    const auto lo = std::min(i, j), hi = std::max(i, j);
    if (auto it = dq[lo].find(hi); it != dq[lo].end()) heap.erase({-it->second, lo, hi});
    dq[i][j] = v;
    dq[j][i] = v;
    heap.emplace(-v, lo, hi);
  };
  auto drop_dq = [&](std::uint32_t i, std::uint32_t j) {
    const auto lo = std::min(i, j), hi = std::max(i, j);
    if (auto it = dq[lo].find(hi); it != dq[lo].end()) heap.erase({-it->second, lo, hi});
    dq[i].erase(j);
    dq[j].erase(i);
  };

  while (!heap.empty()) {
    const auto [neg, i, j] = *heap.begin();
    if (-neg <= 0.0) break;
    // Survivor keeps the larger neighbor map; ties keep the smaller id.
    std::uint32_t keep = i, gone = j;
    if (dq[j].size() > dq[i].size()) std::swap(keep, gone);
    const double gain = -neg;

    drop_dq(keep, gone);
    const auto gone_row = dq[gone];
    for (const auto& [k, v] : gone_row) drop_dq(gone, k);
    std::vector<std::pair<std::uint32_t, double>> updates;
    for (const auto& [k, v] : gone_row) {
      auto it = dq[keep].find(k);
      updates.emplace_back(k, it != dq[keep].end() ? it->second + v : v - 2.0 * a[keep] * a[k]);
    }
    for (const auto& [k, v] : dq[keep]) {
      if (!gone_row.count(k)) updates.emplace_back(k, v - 2.0 * a[gone] * a[k]);
    }
    for (const auto& [k, v] : updates) set_dq(keep, k, v);
    a[keep] += a[gone];
    a[gone] = 0.0;
    parent[gone] = keep;
    q += gain;
    out.merges.push_back({gone, keep, gain, q});
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t r = v;
    while (parent[r] != r) r = parent[r];
    parent[v] = r;
  }
  out.partition = normalize_partition(parent);
  out.partition.modularity = modularity(u, out.partition);
  return out;
}

enum class CommunityAlgorithm { girvan_newman, cnm };

struct PipelineOptions {
  CommunityAlgorithm algo = CommunityAlgorithm::cnm;
  std::size_t max_community_size = 1000;
  unsigned k = 3;
  /// Girvan-Newman runs only on communities with at most this many nodes;
  /// larger ones fall back to CNM.
  std::size_t gn_node_budget = 2000;
  std::optional<DepthProbabilities> sampling;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct CommunitySummary {
  std::uint32_t id = 0;
  std::vector<NodeId> nodes;  // compacted ids, ascending
  std::string label;
  double label_share = 0.0;
  bool indivisible = false;  // still above max size, but no split improved Q
  CensusResult census;
  std::vector<MotifMetrics> metrics;  // classes present in the census
};

struct CommunityReport {
  CommunityAlgorithm algo = CommunityAlgorithm::cnm;
  PipelineOptions options;
  std::vector<CommunitySummary> communities;
  double modularity = 0.0;  // final partition on the whole undirected projection
};

/// Product group per external id; products without a group are skipped.
inline std::unordered_map<ExternalId, std::string> group_labels(const std::vector<ProductRecord>& records) {
  std::unordered_map<ExternalId, std::string> out;
  for (const auto& r : records)
    if (r.group) out[r.id] = *r.group;
  return out;
}

namespace detail {

// Splits `nodes` (ids of g) once. Returns empty when no split improves Q.
inline std::vector<std::vector<NodeId>> split_community(const DirectedGraph& g, const std::vector<NodeId>& nodes,
                                                        const PipelineOptions& opt, unsigned threads) {
  const auto sub = induced_subgraph(g, nodes);
  const auto u = UndirectedView::of(sub);
  Partition p;
  if (opt.algo == CommunityAlgorithm::girvan_newman && nodes.size() <= opt.gn_node_budget) {
    std::size_t comps = 0;
    const auto labels = EdgeGraph(u).component_labels(&comps);
    if (comps > 1) {
      p = normalize_partition(labels);
      p.modularity = modularity(u, p);
    } else {
      GirvanNewmanOptions gn;
      gn.first_split_only = true;
      gn.threads = threads;
      p = girvan_newman(u, gn).partition;
    }
    // A split that lowers Q below the unsplit community is not taken.
    if (p.community_count > 1 && p.modularity <= 0.0) p.community_count = 1;
  } else {
    p = cnm_greedy(u).partition;
  }
  if (p.community_count <= 1) return {};
  std::vector<std::vector<NodeId>> parts(p.community_count);
  for (std::size_t i = 0; i < nodes.size(); ++i) parts[p.assignment[i]].push_back(nodes[i]);
  return parts;
}

}  // namespace detail

/// Recursively splits g until every community has at most
/// max_community_size nodes (or cannot be split), then censuses each
/// community's induced subgraph and labels it by its dominant product group.
inline CommunityReport community_pipeline(const DirectedGraph& g,
                                          const std::unordered_map<ExternalId, std::string>& labels,
                                          const PipelineOptions& opt) {
  detail::check_order(opt.k);
  if (opt.max_community_size < opt.k) throw GraphError("max community size must be at least k");
  if (opt.sampling) validate_probabilities(opt.k, *opt.sampling);
  const unsigned threads = resolve_threads(opt.threads);

  std::vector<std::pair<std::vector<NodeId>, bool>> finals;
  std::vector<std::vector<NodeId>> work;
  {
    std::vector<NodeId> all(g.node_count());
    for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
    work.push_back(std::move(all));
  }
  while (!work.empty()) {
    auto nodes = std::move(work.back());
    work.pop_back();
    if (nodes.size() <= opt.max_community_size) {
      finals.emplace_back(std::move(nodes), false);
      continue;
    }
    auto parts = detail::split_community(g, nodes, opt, threads);
    if (parts.empty()) {
      finals.emplace_back(std::move(nodes), true);
      continue;
    }
    for (auto& p : parts) work.push_back(std::move(p));
  }
  std::sort(finals.begin(), finals.end(), [](const auto& x, const auto& y) { return x.first.front() < y.first.front(); });

  CommunityReport rep;
  rep.algo = opt.algo;
  rep.options = opt;
  rep.communities.resize(finals.size());
  std::vector<std::uint32_t> assignment(g.node_count(), 0);
  for (std::size_t c = 0; c < finals.size(); ++c) {
    auto& s = rep.communities[c];
    s.id = static_cast<std::uint32_t>(c);
    s.nodes = finals[c].first;
    std::sort(s.nodes.begin(), s.nodes.end());
    s.indivisible = finals[c].second;
    for (NodeId v : s.nodes) assignment[v] = s.id;

    std::map<std::string, std::size_t> votes;
    for (NodeId v : s.nodes) {
      auto it = labels.find(g.external_id(v));
      ++votes[it == labels.end() ? std::string("unlabeled") : it->second];
    }
    // Highest vote wins; map order settles ties alphabetically.
    for (const auto& [name, count] : votes) {
      const double share = static_cast<double>(count) / static_cast<double>(s.nodes.size());
      if (share > s.label_share) {
        s.label = name;
        s.label_share = share;
      }
    }
  }

  const auto& cat = catalog(opt.k);
  parallel_for(rep.communities.size(), threads, [&](unsigned, std::size_t c) {
    auto& s = rep.communities[c];
    const auto sub = induced_subgraph(g, s.nodes);
    s.census = opt.sampling ? sampled_census(sub, opt.k, *opt.sampling, mix_seed(opt.seed, c), 1)
                            : census(sub, opt.k, 1);
    for (const auto& cls : cat.classes())
      if (s.census.count(cls.class_id) > 0) s.metrics.push_back(metrics_for(cls));
  });
  rep.modularity = modularity(UndirectedView::of(g), assignment);
  return rep;
}

}  // namespace motifscope
