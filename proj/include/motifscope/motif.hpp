#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "motifscope/graph.hpp"
#include "motifscope/parallel.hpp"

namespace motifscope {

using ClassId = std::uint32_t;

namespace detail {

inline void check_order(unsigned k) {
  if (k != 3 && k != 4) throw GraphError("motif order must be 3 or 4, got " + std::to_string(k));
}

inline const std::vector<std::array<std::uint8_t, 4>>& permutations(unsigned k) {
  static const auto build = [](unsigned n) {
    std::vector<std::array<std::uint8_t, 4>> out;
    std::array<std::uint8_t, 4> p{0, 1, 2, 3};
    do {
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + n));
    return out;
  };
  static const auto p3 = build(3);
  static const auto p4 = build(4);
  return k == 3 ? p3 : p4;
}

// Underlying undirected graph of the bitmask is connected.
inline bool weakly_connected(AdjacencyBitmask b) {
  unsigned seen = 1, frontier = 1;
  while (frontier) {
    unsigned next = 0;
    for (unsigned i = 0; i < b.k; ++i) {
      if (!((frontier >> i) & 1u)) continue;
      for (unsigned j = 0; j < b.k; ++j)
        if (j != i && (b.test(i, j) || b.test(j, i))) next |= 1u << j;
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << b.k) - 1;
}

}  // namespace detail

/// Relabels node i as perm[i].
inline AdjacencyBitmask permute(AdjacencyBitmask b, std::span<const std::uint8_t> perm) {
  AdjacencyBitmask out{b.k, 0};
  for (unsigned i = 0; i < b.k; ++i)
    for (unsigned j = 0; j < b.k; ++j)
      if (i != j && b.test(i, j)) out.set(perm[i], perm[j]);
  return out;
}

/// Minimum bitmask value over all k! relabelings.
inline AdjacencyBitmask canonical_form(AdjacencyBitmask b) {
  detail::check_order(b.k);
  AdjacencyBitmask best = b;
  for (const auto& p : detail::permutations(b.k)) {
    const auto c = permute(b, std::span<const std::uint8_t>(p.data(), b.k));
    if (c.bits < best.bits) best = c;
  }
  return best;
}

struct MotifClass {
  unsigned k = 0;
  ClassId class_id = 0;
  AdjacencyBitmask canonical;
  unsigned edge_count = 0;
  std::vector<unsigned> in_degree_profile;  // sorted ascending

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j)
        if (i != j && canonical.test(i, j)) out.emplace_back(i, j);
    return out;
  }
};

/// Isomorphism classes of weakly connected k-node digraphs, ordered by
/// (edge count, canonical bitmask) and numbered from 1.
class MotifCatalog {
 public:
  unsigned k() const { return k_; }
  std::size_t size() const { return classes_.size(); }
  const std::vector<MotifClass>& classes() const { return classes_; }
  const MotifClass& at(ClassId id) const { return classes_.at(id - 1); }

  /// Class of an arbitrary (not necessarily canonical) bitmask; 0 when the
  /// bitmask is not weakly connected.
  ClassId classify(std::uint16_t bits) const { return table_[bits]; }
  ClassId classify(AdjacencyBitmask b) const { return table_[b.bits]; }

  friend MotifCatalog build_catalog(unsigned k);

 private:
  unsigned k_ = 0;
  std::vector<MotifClass> classes_;
  std::vector<ClassId> table_;
};

inline MotifCatalog build_catalog(unsigned k) {
  detail::check_order(k);
  const unsigned pairs = k * (k - 1);
  const std::uint32_t masks = 1u << pairs;
  std::vector<std::uint16_t> canon(masks, 0);
  std::vector<std::uint16_t> reps;
  for (std::uint32_t m = 0; m < masks; ++m) {
    const AdjacencyBitmask b{static_cast<std::uint8_t>(k), static_cast<std::uint16_t>(m)};
    if (!detail::weakly_connected(b)) continue;
    canon[m] = canonical_form(b).bits;
    if (canon[m] == m) reps.push_back(static_cast<std::uint16_t>(m));
  }
  std::sort(reps.begin(), reps.end(), [](std::uint16_t a, std::uint16_t b) {
    const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  MotifCatalog cat;
  cat.k_ = k;
  std::map<std::uint16_t, ClassId> id_of;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    MotifClass c;
    c.k = k;
    c.class_id = static_cast<ClassId>(i + 1);
    c.canonical = {static_cast<std::uint8_t>(k), reps[i]};
    c.edge_count = c.canonical.edge_count();
    for (unsigned j = 0; j < k; ++j) c.in_degree_profile.push_back(c.canonical.in_degree(j));
    std::sort(c.in_degree_profile.begin(), c.in_degree_profile.end());
    id_of[reps[i]] = c.class_id;
    cat.classes_.push_back(std::move(c));
  }
  cat.table_.assign(masks, 0);
  for (std::uint32_t m = 0; m < masks; ++m) {
    const AdjacencyBitmask b{static_cast<std::uint8_t>(k), static_cast<std::uint16_t>(m)};
    if (detail::weakly_connected(b)) cat.table_[m] = id_of.at(canon[m]);
  }
  return cat;
}

/// Shared catalog instance for k = 3 or 4.
inline const MotifCatalog& catalog(unsigned k) {
  detail::check_order(k);
  static const MotifCatalog c3 = build_catalog(3);
  static const MotifCatalog c4 = build_catalog(4);
  return k == 3 ? c3 : c4;
}

/// Class id of the motif with the given edges on nodes 0..k-1.
inline ClassId class_of_edges(unsigned k, const std::vector<Edge>& edges) {
  AdjacencyBitmask b{static_cast<std::uint8_t>(k), 0};
  for (const auto& [u, v] : edges) b.set(u, v);
  return catalog(k).classify(b);
}

/// Numbering used in the original triad write-up for the four 3-node motifs
/// it discusses, mapped to catalog ids by structure.
struct TriadAlias {
  unsigned published_id;
  const char* description;
  std::vector<Edge> edges;
};

inline const std::vector<TriadAlias>& triad_aliases() {
  static const std::vector<TriadAlias> aliases = {
      {1, "diverging: a->b, a->c", {{0, 1}, {0, 2}}},
      {3, "mutual pair with outgoing edge: a<->b, a->c", {{0, 1}, {1, 0}, {0, 2}}},
      {4, "converging: a->c, b->c", {{0, 2}, {1, 2}}},
      {10, "mutual pair with incoming edge: a<->b, c->b", {{0, 1}, {1, 0}, {2, 1}}},
  };
  return aliases;
}

inline ClassId alias_to_class(unsigned published_id) {
  for (const auto& a : triad_aliases())
    if (a.published_id == published_id) return class_of_edges(3, a.edges);
  return 0;
}

/// Per-depth inclusion probabilities for RAND-ESU; entry d applies when the
/// (d+1)-th node is added (entry 0 gates the root).
using DepthProbabilities = std::vector<double>;

inline void validate_probabilities(unsigned k, const DepthProbabilities& probs) {
  if (probs.size() != k)
    throw GraphError("expected " + std::to_string(k) + " sampling probabilities, got " + std::to_string(probs.size()));
  for (double p : probs)
    if (!(p > 0.0 && p <= 1.0)) throw GraphError("sampling probabilities must lie in (0, 1]");
}

namespace detail {

// ESU over the undirected projection: every connected induced k-set whose
// smallest node is the root is reached exactly once.
class Esu {
 public:
  Esu(const UndirectedView& u, unsigned k) : u_(u), k_(k) {}

  template <typename Visitor, typename Keep>
  void run_root(NodeId root, Visitor& visit, Keep& keep) {
    if (!keep(0)) return;
    sub_[0] = root;
    std::vector<NodeId> ext;
    for (NodeId w : u_.neighbors(root))
      if (w > root) ext.push_back(w);
    extend(1, ext, root, visit, keep);
  }

 private:
  bool near_subgraph(NodeId x, unsigned size) const {
    for (unsigned i = 0; i < size; ++i)
      if (sub_[i] == x || u_.adjacent(sub_[i], x)) return true;
    return false;
  }

  template <typename Visitor, typename Keep>
  void extend(unsigned size, std::vector<NodeId>& ext, NodeId root, Visitor& visit, Keep& keep) {
    if (size + 1 == k_) {
      for (auto it = ext.rbegin(); it != ext.rend(); ++it) {
        if (!keep(size)) continue;
        sub_[size] = *it;
        visit(std::span<const NodeId>(sub_.data(), k_));
      }
      return;
    }
    while (!ext.empty()) {
      const NodeId w = ext.back();
      ext.pop_back();
      if (!keep(size)) continue;
      std::vector<NodeId> next = ext;
      for (NodeId x : u_.neighbors(w))
        if (x > root && !near_subgraph(x, size)) next.push_back(x);
      sub_[size] = w;
      extend(size + 1, next, root, visit, keep);
    }
  }

  const UndirectedView& u_;
  unsigned k_;
  std::array<NodeId, 4> sub_{};
};

}  // namespace detail

/// Visits every weakly connected induced k-node subset of g exactly once.
/// The visitor gets the node tuple (root first, then extension order).
template <typename Visitor>
std::uint64_t enumerate_connected_subgraphs(const DirectedGraph& g, unsigned k, Visitor&& visitor) {
  detail::check_order(k);
  const auto u = UndirectedView::of(g);
  detail::Esu esu(u, k);
  std::uint64_t visited = 0;
  auto visit = [&](std::span<const NodeId> nodes) {
    ++visited;
    visitor(nodes);
  };
  auto keep = [](unsigned) { return true; };
  for (NodeId root = 0; root < g.node_count(); ++root) esu.run_root(root, visit, keep);
  return visited;
}

struct CensusResult {
  unsigned k = 0;
  std::vector<std::uint64_t> counts;  // counts[class_id - 1]; raw hits when sampled
  std::uint64_t total_subgraphs = 0;
  double elapsed_seconds = 0.0;
  bool sampled = false;
  DepthProbabilities sampling_probabilities;

  std::uint64_t count(ClassId id) const { return counts.at(id - 1); }

  /// Unbiased estimate of the class count: raw hits scaled by the inverse
  /// leaf inclusion probability.
  double estimate(ClassId id) const { return static_cast<double>(count(id)) / inclusion_probability(); }
  double estimated_total() const { return static_cast<double>(total_subgraphs) / inclusion_probability(); }

  double inclusion_probability() const {
    double p = 1.0;
    for (double x : sampling_probabilities) p *= x;
    return p;
  }

  double frequency(ClassId id) const {
    return total_subgraphs ? static_cast<double>(count(id)) / static_cast<double>(total_subgraphs) : 0.0;
  }
};

namespace detail {

inline std::uint16_t induced_bits(const DirectedGraph& g, std::span<const NodeId> nodes) {
  const unsigned k = static_cast<unsigned>(nodes.size());
  std::uint16_t bits = 0;
  unsigned pos = 0;
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j) {
      if (i == j) continue;
      if (g.has_edge(nodes[i], nodes[j])) bits = static_cast<std::uint16_t>(bits | (1u << pos));
      ++pos;
    }
  return bits;
}

inline CensusResult run_census(const DirectedGraph& g, unsigned k, const DepthProbabilities* probs,
                               std::uint64_t seed, unsigned threads) {
  detail::check_order(k);
  const auto start = std::chrono::steady_clock::now();
  const auto& cat = catalog(k);
  const auto u = UndirectedView::of(g);
  threads = resolve_threads(threads);

  struct Worker {
    std::vector<std::uint64_t> counts;
    std::uint64_t misses = 0;
  };
  std::vector<Worker> workers(threads);
  for (auto& w : workers) w.counts.assign(cat.size(), 0);

  parallel_for(g.node_count(), threads, [&](unsigned wid, std::size_t root) {
    auto& w = workers[wid];
    detail::Esu esu(u, k);
    auto visit = [&](std::span<const NodeId> nodes) {
      const ClassId c = cat.classify(induced_bits(g, nodes));
      if (c == 0)
        ++w.misses;
      else
        ++w.counts[c - 1];
    };
    if (!probs) {
      auto keep = [](unsigned) { return true; };
      esu.run_root(static_cast<NodeId>(root), visit, keep);
    } else {
      std::mt19937_64 rng(mix_seed(seed, root));
      auto keep = [&](unsigned depth) {
        const double p = (*probs)[depth];
        if (p >= 1.0) return true;
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
      };
      esu.run_root(static_cast<NodeId>(root), visit, keep);
    }
  });

  CensusResult r;
  r.k = k;
  r.counts.assign(cat.size(), 0);
  for (const auto& w : workers) {
    if (w.misses) throw GraphError("visited subgraph missing from catalog");
    for (std::size_t c = 0; c < cat.size(); ++c) r.counts[c] += w.counts[c];
  }
  r.total_subgraphs = std::accumulate(r.counts.begin(), r.counts.end(), std::uint64_t{0});
  r.sampled = probs != nullptr;
  r.sampling_probabilities = probs ? *probs : DepthProbabilities(k, 1.0);
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

/// Exact count of connected induced k-subgraphs per catalog class.
inline CensusResult census(const DirectedGraph& g, unsigned k, unsigned threads = 0) {
  return detail::run_census(g, k, nullptr, 0, threads);
}

/// RAND-ESU estimate. Each root draws from its own stream seeded by
/// (seed, root), so results do not depend on the thread count.
inline CensusResult sampled_census(const DirectedGraph& g, unsigned k, const DepthProbabilities& probs,
                                   std::uint64_t seed, unsigned threads = 0) {
  detail::check_order(k);
  validate_probabilities(k, probs);
  return detail::run_census(g, k, &probs, seed, threads);
}

}  // namespace motifscope
