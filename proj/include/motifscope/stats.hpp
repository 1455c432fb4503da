#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "motifscope/graph.hpp"
#include "motifscope/parallel.hpp"

namespace motifscope {

struct ComponentLabeling {
  std::vector<std::uint32_t> label;  // node -> component index
  std::size_t component_count = 0;
  std::uint32_t largest = 0;  // component with most nodes; lowest index on ties
  std::size_t largest_nodes = 0;
  std::size_t largest_edges = 0;  // directed edges with both ends inside
};

namespace detail {

inline void finish_labeling(const DirectedGraph& g, ComponentLabeling& c) {
  std::vector<std::size_t> sizes(c.component_count, 0);
  for (auto l : c.label) ++sizes[l];
  for (std::uint32_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] > c.largest_nodes) {
      c.largest_nodes = sizes[i];
      c.largest = i;
    }
  }
  for (const auto& [u, v] : g.edges())
    if (c.label[u] == c.largest && c.label[v] == c.largest) ++c.largest_edges;
}

}  // namespace detail

/// Components of the undirected projection, numbered in order of their
/// smallest node.
inline ComponentLabeling weakly_connected_components(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  ComponentLabeling c;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  c.label.assign(n, unset);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (c.label[s] != unset) continue;
    const auto id = static_cast<std::uint32_t>(c.component_count++);
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (auto row : {g.out_neighbors(u), g.in_neighbors(u)}) {
        for (NodeId v : row) {
          if (c.label[v] == unset) {
            c.label[v] = id;
            stack.push_back(v);
          }
        }
      }
    }
  }
  detail::finish_labeling(g, c);
  return c;
}

/// Iterative Tarjan; components are numbered in completion order.
inline ComponentLabeling strongly_connected_components(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<Frame> call;
  ComponentLabeling c;
  c.label.assign(n, unset);
  std::uint32_t counter = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      const auto out = g.out_neighbors(f.node);
      if (f.next < out.size()) {
        const NodeId w = out[f.next++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const NodeId v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        const auto id = static_cast<std::uint32_t>(c.component_count++);
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.label[w] = id;
        } while (w != v);
      }
    }
  }
  detail::finish_labeling(g, c);
  return c;
}

struct ClusteringStats {
  double avg_clustering = 0.0;
  std::uint64_t triangles = 0;
  std::uint64_t wedges = 0;  // sum over nodes of deg*(deg-1)/2
  double closed_triangle_fraction = 0.0;  // 3T/W
};

/// Per-node triangle counts of the undirected view; each triangle is found
/// once, from its lowest-ordered edge.
inline std::vector<std::uint64_t> triangles_per_node(const UndirectedView& u) {
  std::vector<std::uint64_t> t(u.node_count(), 0);
  for (const auto& [a, b] : u.edges()) {
    const auto na = u.neighbors(a);
    const auto nb = u.neighbors(b);
    auto ia = std::upper_bound(na.begin(), na.end(), b);
    auto ib = std::upper_bound(nb.begin(), nb.end(), b);
    while (ia != na.end() && ib != nb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++t[a];
        ++t[b];
        ++t[*ia];
        ++ia;
        ++ib;
      }
    }
  }
  return t;
}

inline ClusteringStats clustering_and_triangles(const UndirectedView& u) {
  ClusteringStats s;
  const std::size_t n = u.node_count();
  const auto t = triangles_per_node(u);
  double sum = 0.0;
  std::uint64_t corners = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t d = u.degree(v);
    const std::uint64_t pairs = d * (d - (d > 0 ? 1 : 0)) / 2;
    s.wedges += pairs;
    corners += t[v];
    if (d >= 2) sum += static_cast<double>(t[v]) / static_cast<double>(pairs);
  }
  s.triangles = corners / 3;
  s.avg_clustering = n ? sum / static_cast<double>(n) : 0.0;
  s.closed_triangle_fraction = s.wedges ? 3.0 * static_cast<double>(s.triangles) / static_cast<double>(s.wedges) : 0.0;
  return s;
}

namespace detail {

// BFS from `source`; adds the count of nodes found at each distance >= 1 to
// `hist` and returns the eccentricity (max distance reached).
inline std::uint32_t bfs_histogram(const UndirectedView& u, NodeId source, std::vector<std::uint32_t>& dist,
                                   std::vector<NodeId>& queue, std::vector<std::uint64_t>& hist) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::uint32_t ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId x = queue[head];
    for (NodeId y : u.neighbors(x)) {
      if (dist[y] != unset) continue;
      dist[y] = dist[x] + 1;
      ecc = dist[y];
      if (hist.size() <= ecc) hist.resize(ecc + 1, 0);
      ++hist[ecc];
      queue.push_back(y);
    }
  }
  for (NodeId x : queue) dist[x] = unset;
  return ecc;
}

}  // namespace detail

struct DiameterResult {
  std::uint32_t value = 0;
  bool lower_bound = false;  // budget ran out before every source was swept
  std::size_t sources_done = 0;
};

/// Longest shortest path inside the largest weakly connected component,
/// by BFS from every node of it. A zero budget means unlimited.
inline DiameterResult exact_diameter(const UndirectedView& u, std::chrono::milliseconds budget = {},
                                     unsigned threads = 1) {
  DiameterResult r;
  const std::size_t n = u.node_count();
  if (n == 0) return r;
  // Largest component of the view itself.
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(n, unset);
  std::vector<NodeId> members, best;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    members.assign(1, s);
    comp[s] = s;
    for (std::size_t h = 0; h < members.size(); ++h)
      for (NodeId y : u.neighbors(members[h]))
        if (comp[y] == unset) {
          comp[y] = s;
          members.push_back(y);
        }
    if (members.size() > best.size()) best = members;
  }
  std::sort(best.begin(), best.end());

  threads = resolve_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint32_t> ecc(best.size(), 0);
  std::vector<char> done(best.size(), 0);
  struct Scratch {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> queue;
    std::vector<std::uint64_t> hist;
  };
  std::vector<Scratch> scratch(threads);
  parallel_for(best.size(), threads, [&](unsigned w, std::size_t i) {
    if (budget.count() > 0 && std::chrono::steady_clock::now() - start > budget) return;
    auto& s = scratch[w];
    if (s.dist.empty()) s.dist.assign(n, unset);
    ecc[i] = detail::bfs_histogram(u, best[i], s.dist, s.queue, s.hist);
    done[i] = 1;
  });
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (done[i]) {
      ++r.sources_done;
      r.value = std::max(r.value, ecc[i]);
    }
  }
  r.lower_bound = r.sources_done < best.size();
  return r;
}

struct DistanceHistogram {
  std::vector<std::uint64_t> pairs_at;  // pairs_at[d] = reachable (source, target) pairs at distance d; [0] = 0
  std::uint32_t max_eccentricity = 0;
};

/// Distance histogram over BFS sweeps from `sources`.
inline DistanceHistogram distance_histogram(const UndirectedView& u, const std::vector<NodeId>& sources,
                                            unsigned threads = 1) {
  threads = resolve_threads(threads);
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  struct Scratch {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> queue;
    std::vector<std::uint64_t> hist;
    std::uint32_t ecc = 0;
  };
  std::vector<Scratch> scratch(threads);
  parallel_for(sources.size(), threads, [&](unsigned w, std::size_t i) {
    auto& s = scratch[w];
    if (s.dist.empty()) s.dist.assign(u.node_count(), unset);
    s.ecc = std::max(s.ecc, detail::bfs_histogram(u, sources[i], s.dist, s.queue, s.hist));
  });
  DistanceHistogram h;
  h.pairs_at.assign(1, 0);
  for (const auto& s : scratch) {
    if (h.pairs_at.size() < s.hist.size()) h.pairs_at.resize(s.hist.size(), 0);
    for (std::size_t d = 1; d < s.hist.size(); ++d) h.pairs_at[d] += s.hist[d];
    h.max_eccentricity = std::max(h.max_eccentricity, s.ecc);
  }
  return h;
}

/// Smallest real d with g(d) = quantile, where g is the cumulative fraction
/// of reachable pairs within d hops, interpolated linearly between integer
/// levels from g(0) = 0.
inline double interpolate_quantile(const DistanceHistogram& h, double quantile = 0.9) {
  std::uint64_t total = 0;
  for (auto c : h.pairs_at) total += c;
  if (total == 0) return 0.0;
  double prev = 0.0;
  std::uint64_t cum = 0;
  for (std::size_t d = 1; d < h.pairs_at.size(); ++d) {
    cum += h.pairs_at[d];
    const double cur = static_cast<double>(cum) / static_cast<double>(total);
    if (cur >= quantile) return static_cast<double>(d - 1) + (quantile - prev) / (cur - prev);
    prev = cur;
  }
  return static_cast<double>(h.pairs_at.size() - 1);
}

/// Sources drawn uniformly without replacement, sorted.
inline std::vector<NodeId> sample_sources(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  if (count >= n) return all;
  std::mt19937_64 rng(mix_seed(seed, 0));
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

struct EffectiveDiameter {
  double value = 0.0;
  std::uint32_t max_sampled_eccentricity = 0;
  std::size_t sources = 0;
};

inline EffectiveDiameter effective_diameter(const UndirectedView& u, std::size_t sample_sources_count,
                                            std::uint64_t seed, unsigned threads = 1, double quantile = 0.9) {
  if (sample_sources_count == 0) throw GraphError("effective_diameter needs at least one source");
  const auto sources = sample_sources(u.node_count(), sample_sources_count, seed);
  const auto h = distance_histogram(u, sources, threads);
  return {interpolate_quantile(h, quantile), h.max_eccentricity, sources.size()};
}

struct GraphSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t undirected_edges = 0;
  std::size_t wcc_nodes = 0;
  std::size_t wcc_edges = 0;
  std::size_t scc_nodes = 0;
  std::size_t scc_edges = 0;
  double avg_clustering = 0.0;
  std::uint64_t triangles = 0;
  std::uint64_t wedges = 0;
  double closed_triangle_fraction = 0.0;
  std::optional<DiameterResult> diameter;
  double effective_diameter_90 = 0.0;
  std::size_t effective_diameter_sources = 0;
};

struct SummaryOptions {
  std::size_t sample_sources = 1000;
  std::uint64_t seed = 42;
  bool exact_diameter = false;
  std::chrono::milliseconds diameter_budget{0};
  unsigned threads = 0;
};

inline GraphSummary summarize(const DirectedGraph& g, const SummaryOptions& opt = {}) {
  GraphSummary s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  const auto wcc = weakly_connected_components(g);
  s.wcc_nodes = wcc.largest_nodes;
  s.wcc_edges = wcc.largest_edges;
  const auto scc = strongly_connected_components(g);
  s.scc_nodes = scc.largest_nodes;
  s.scc_edges = scc.largest_edges;
  const auto u = UndirectedView::of(g);
  s.undirected_edges = u.edge_count();
  const auto cl = clustering_and_triangles(u);
  s.avg_clustering = cl.avg_clustering;
  s.triangles = cl.triangles;
  s.wedges = cl.wedges;
  s.closed_triangle_fraction = cl.closed_triangle_fraction;
  if (s.nodes > 0) {
    const auto eff = effective_diameter(u, opt.sample_sources, opt.seed, opt.threads);
    s.effective_diameter_90 = eff.value;
    s.effective_diameter_sources = eff.sources;
  }
  if (opt.exact_diameter) s.diameter = exact_diameter(u, opt.diameter_budget, opt.threads);
  return s;
}

}  // namespace motifscope
