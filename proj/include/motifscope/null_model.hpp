#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "motifscope/graph.hpp"
#include "motifscope/motif.hpp"
#include "motifscope/parallel.hpp"

namespace motifscope {

/// Double-edge switching on a mutable copy of a graph's edges. A swap turns
/// (a,b),(c,d) into (a,d),(c,b), which keeps every in- and out-degree.
class EdgeSwitcher {
 public:
  explicit EdgeSwitcher(const DirectedGraph& g) : n_(g.node_count()), edges_(g.edges()), ids_(g.id_map()) {
    present_.reserve(edges_.size() * 2);
    for (const auto& e : edges_) present_.insert(key(e));
  }

  /// Swaps edges i and j if the result stays simple.
  bool try_swap(std::size_t i, std::size_t j) {
    if (i == j) return false;
    const auto [a, b] = edges_[i];
    const auto [c, d] = edges_[j];
    if (a == d || c == b) return false;
    const Edge ad{a, d}, cb{c, b};
    if (present_.count(key(ad)) || present_.count(key(cb))) return false;
    present_.erase(key(edges_[i]));
    present_.erase(key(edges_[j]));
    present_.insert(key(ad));
    present_.insert(key(cb));
    edges_[i] = ad;
    edges_[j] = cb;
    return true;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  DirectedGraph graph() const { return DirectedGraph(n_, edges_, ids_); }

 private:
  static std::uint64_t key(const Edge& e) { return (std::uint64_t{e.first} << 32) | e.second; }

  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<ExternalId> ids_;
  std::unordered_set<std::uint64_t> present_;
};

struct RewireResult {
  DirectedGraph graph;
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
};

/// Degree-preserving randomization: swaps_per_edge * |E| attempted swaps
/// between uniformly chosen edge pairs; rejected attempts are only counted.
inline RewireResult rewire(const DirectedGraph& g, unsigned swaps_per_edge, std::uint64_t seed) {
  if (swaps_per_edge < 1) throw GraphError("swaps_per_edge must be at least 1");
  EdgeSwitcher sw(g);
  RewireResult r;
  const std::size_t m = g.edge_count();
  if (m >= 2) {
    std::mt19937_64 rng(seed);
    r.attempted = std::uint64_t{swaps_per_edge} * m;
    for (std::uint64_t t = 0; t < r.attempted; ++t) {
      const std::size_t i = rng() % m;
      const std::size_t j = rng() % m;
      if (sw.try_swap(i, j)) ++r.accepted;
    }
  }
  r.graph = sw.graph();
  return r;
}

struct ClassSignificance {
  ClassId class_id = 0;
  double real_count = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::optional<double> z;  // empty when stddev is 0 and real != mean
  double profile = 0.0;

  bool degenerate() const { return !z.has_value(); }
};

struct SignificanceReport {
  unsigned k = 0;
  unsigned ensembles = 0;
  unsigned swaps_per_edge = 0;
  std::uint64_t seed = 0;
  bool sampled = false;
  std::vector<ClassSignificance> classes;
};

struct SignificanceOptions {
  unsigned ensembles = 100;
  unsigned swaps_per_edge = 10;
  std::uint64_t seed = 42;
  std::optional<DepthProbabilities> sampling;  // same probabilities for the real graph and every ensemble
  unsigned threads = 0;
};

/// z-scores from per-class counts. Standard deviation uses the n-1
/// denominator. When it is zero, z is 0 for real == mean and absent otherwise.
inline std::vector<ClassSignificance> score_classes(const std::vector<double>& real,
                                                    const std::vector<std::vector<double>>& ensemble_counts) {
  const std::size_t classes = real.size();
  const double n = static_cast<double>(ensemble_counts.size());
  std::vector<ClassSignificance> out(classes);
  double norm = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& s = out[c];
    s.class_id = static_cast<ClassId>(c + 1);
    s.real_count = real[c];
    double sum = 0.0;
    for (const auto& e : ensemble_counts) sum += e[c];
    s.mean = sum / n;
    double sq = 0.0;
    for (const auto& e : ensemble_counts) sq += (e[c] - s.mean) * (e[c] - s.mean);
    s.stddev = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
    if (s.stddev > 0.0)
      s.z = (s.real_count - s.mean) / s.stddev;
    else if (s.real_count == s.mean)
      s.z = 0.0;
    if (s.z) norm += *s.z * *s.z;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (auto& s : out)
      if (s.z) s.profile = *s.z / norm;
  return out;
}

inline SignificanceReport significance(const DirectedGraph& g, unsigned k, const SignificanceOptions& opt = {}) {
  if (opt.ensembles < 2) throw GraphError("significance needs at least 2 ensembles");
  if (opt.swaps_per_edge < 1) throw GraphError("swaps_per_edge must be at least 1");
  if (opt.sampling) validate_probabilities(k, *opt.sampling);
  const unsigned threads = resolve_threads(opt.threads);

  auto counts_of = [&](const DirectedGraph& graph, std::uint64_t census_seed, unsigned census_threads) {
    const CensusResult r = opt.sampling ? sampled_census(graph, k, *opt.sampling, census_seed, census_threads)
                                        : census(graph, k, census_threads);
    std::vector<double> v(r.counts.size());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = r.estimate(static_cast<ClassId>(c + 1));
    return v;
  };

  const auto real = counts_of(g, mix_seed(opt.seed, 0), threads);
  std::vector<std::vector<double>> ens(opt.ensembles);
  parallel_for(opt.ensembles, threads, [&](unsigned, std::size_t i) {
    const auto rw = rewire(g, opt.swaps_per_edge, mix_seed(opt.seed, 2 * i + 1));
    ens[i] = counts_of(rw.graph, mix_seed(opt.seed, 2 * i + 2), 1);
  });

  SignificanceReport rep;
  rep.k = k;
  rep.ensembles = opt.ensembles;
  rep.swaps_per_edge = opt.swaps_per_edge;
  rep.seed = opt.seed;
  rep.sampled = opt.sampling.has_value();
  rep.classes = score_classes(real, ens);
  return rep;
}

}  // namespace motifscope
