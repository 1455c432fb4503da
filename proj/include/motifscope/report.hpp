#pragma once

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "motifscope/community.hpp"
#include "motifscope/metrics.hpp"
#include "motifscope/motif.hpp"
#include "motifscope/null_model.hpp"
#include "motifscope/stats.hpp"

// Text, CSV and JSON renderings. Output is byte-stable for fixed inputs:
// JSON keys are sorted and reals are rounded to 4 decimal places.

namespace motifscope::report {

using nlohmann::json;

inline std::string fixed(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

inline std::string hex_bits(std::uint16_t bits) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%03x", bits);
  return buf;
}

inline std::string join_profile(const std::vector<unsigned>& profile) {
  std::string s;
  for (std::size_t i = 0; i < profile.size(); ++i) s += (i ? ";" : "") + std::to_string(profile[i]);
  return s;
}

inline std::string edge_list(const std::vector<Edge>& edges) {
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i)
    s += (i ? ";" : "") + std::to_string(edges[i].first) + ">" + std::to_string(edges[i].second);
  return s;
}

// ---- catalog ----

inline std::string catalog_csv(const MotifCatalog& cat) {
  std::ostringstream os;
  os << "class_id,k,edges,canonical_bitmask,in_degree_profile,example_edge_list\n";
  for (const auto& c : cat.classes())
    os << c.class_id << ',' << c.k << ',' << c.edge_count << ',' << hex_bits(c.canonical.bits) << ','
       << join_profile(c.in_degree_profile) << ',' << edge_list(c.edges()) << '\n';
  return os.str();
}

inline json catalog_json(const MotifCatalog& cat) {
  json rows = json::array();
  for (const auto& c : cat.classes()) {
    json edges = json::array();
    for (const auto& [a, b] : c.edges()) edges.push_back({a, b});
    rows.push_back({{"class_id", c.class_id},
                    {"k", c.k},
                    {"edges", c.edge_count},
                    {"canonical_bitmask", hex_bits(c.canonical.bits)},
                    {"in_degree_profile", c.in_degree_profile},
                    {"example_edge_list", edges}});
  }
  return {{"k", cat.k()}, {"classes", rows}};
}

// ---- census ----

inline std::string count_text(const CensusResult& r, ClassId id) {
  return r.sampled ? fixed(r.estimate(id)) : std::to_string(r.count(id));
}

/// Header-only when the graph has no connected k-node subset.
inline std::string census_csv(const CensusResult& r) {
  std::ostringstream os;
  os << "class_id,k,edges,count,frequency_fraction\n";
  if (r.total_subgraphs == 0) return os.str();
  const auto& cat = catalog(r.k);
  for (const auto& c : cat.classes())
    os << c.class_id << ',' << r.k << ',' << c.edge_count << ',' << count_text(r, c.class_id) << ','
       << fixed(r.frequency(c.class_id)) << '\n';
  return os.str();
}

/// Two-column frequency data for plotting the class histogram.
inline std::string histogram_csv(const CensusResult& r) {
  std::ostringstream os;
  os << "class_id,count\n";
  for (const auto& c : catalog(r.k).classes()) os << c.class_id << ',' << count_text(r, c.class_id) << '\n';
  return os.str();
}

inline json census_json(const CensusResult& r) {
  json rows = json::array();
  const auto& cat = catalog(r.k);
  if (r.total_subgraphs > 0) {
    for (const auto& c : cat.classes()) {
      json row = {{"class_id", c.class_id},
                  {"k", r.k},
                  {"edges", c.edge_count},
                  {"frequency_fraction", round4(r.frequency(c.class_id))}};
      if (r.sampled)
        row["count"] = round4(r.estimate(c.class_id));
      else
        row["count"] = r.count(c.class_id);
      rows.push_back(row);
    }
  }
  json out = {{"k", r.k}, {"sampled", r.sampled}, {"classes", rows}};
  if (r.sampled) {
    out["total_subgraphs"] = round4(r.estimated_total());
    out["sampling_probabilities"] = r.sampling_probabilities;
  } else {
    out["total_subgraphs"] = r.total_subgraphs;
  }
  return out;
}

// ---- metrics ----

inline std::string metrics_csv(const std::vector<MotifMetrics>& rows) {
  std::ostringstream os;
  os << "class_id,k,edges,in_degree,f_value,motif_rank\n";
  for (const auto& m : rows)
    for (const auto& l : m.levels)
      os << m.class_id << ',' << m.k << ',' << m.edge_count << ',' << l.in_degree << ',' << l.f.decimal(4) << ','
         << m.rank.decimal(4) << '\n';
  return os.str();
}

inline json metrics_json(const MotifMetrics& m) {
  json levels = json::array();
  for (const auto& l : m.levels)
    levels.push_back({{"in_degree", l.in_degree}, {"f", l.f.str()}, {"f_value", round4(l.f.value())},
                      {"positions", l.positions}});
  return {{"class_id", m.class_id},       {"k", m.k},
          {"edges", m.edge_count},        {"purchasability", levels},
          {"motif_rank", m.rank.str()},   {"motif_rank_value", round4(m.rank.value())}};
}

// ---- significance ----

inline std::string significance_csv(const SignificanceReport& r) {
  std::ostringstream os;
  os << "class_id,real_count,mean,stddev,z,profile_component\n";
  for (const auto& c : r.classes)
    os << c.class_id << ',' << fixed(c.real_count) << ',' << fixed(c.mean) << ',' << fixed(c.stddev) << ','
       << (c.z ? fixed(*c.z) : std::string("degenerate")) << ',' << fixed(c.profile) << '\n';
  return os.str();
}

inline json significance_json(const SignificanceReport& r) {
  json rows = json::array();
  for (const auto& c : r.classes) {
    json row = {{"class_id", c.class_id},
                {"real_count", round4(c.real_count)},
                {"mean", round4(c.mean)},
                {"stddev", round4(c.stddev)},
                {"profile_component", round4(c.profile)},
                {"degenerate", c.degenerate()}};
    row["z"] = c.z ? json(round4(*c.z)) : json(nullptr);
    rows.push_back(row);
  }
  return {{"k", r.k},           {"ensembles", r.ensembles}, {"swaps_per_edge", r.swaps_per_edge},
          {"seed", r.seed},     {"sampled", r.sampled},     {"classes", rows}};
}

// ---- graph summary ----

inline std::string summary_text(const GraphSummary& s) {
  auto frac = [](std::size_t part, std::size_t whole) {
    return " (" + fixed(whole ? static_cast<double>(part) / static_cast<double>(whole) : 0.0, 3) + ")";
  };
  std::ostringstream os;
  auto row = [&](const std::string& name, const std::string& value) {
    os << std::left << std::setw(36) << name << value << '\n';
  };
  row("Nodes", std::to_string(s.nodes));
  row("Edges", std::to_string(s.edges));
  row("Nodes in largest WCC", std::to_string(s.wcc_nodes) + frac(s.wcc_nodes, s.nodes));
  row("Edges in largest WCC", std::to_string(s.wcc_edges) + frac(s.wcc_edges, s.edges));
  row("Nodes in largest SCC", std::to_string(s.scc_nodes) + frac(s.scc_nodes, s.nodes));
  row("Edges in largest SCC", std::to_string(s.scc_edges) + frac(s.scc_edges, s.edges));
  row("Average clustering coefficient", fixed(s.avg_clustering));
  row("Number of triangles", std::to_string(s.triangles));
  row("Fraction of closed triangles", fixed(s.closed_triangle_fraction));
  if (s.diameter)
    row("Diameter (longest shortest path)",
        std::to_string(s.diameter->value) + (s.diameter->lower_bound ? " (lower bound)" : ""));
  row("90-percentile effective diameter", fixed(s.effective_diameter_90));
  return os.str();
}

inline json summary_json(const GraphSummary& s) {
  json out = {{"nodes", s.nodes},
              {"edges", s.edges},
              {"undirected_edges", s.undirected_edges},
              {"wcc_nodes", s.wcc_nodes},
              {"wcc_edges", s.wcc_edges},
              {"scc_nodes", s.scc_nodes},
              {"scc_edges", s.scc_edges},
              {"avg_clustering", round4(s.avg_clustering)},
              {"triangles", s.triangles},
              {"wedges", s.wedges},
              {"closed_triangle_fraction", round4(s.closed_triangle_fraction)},
              {"effective_diameter_90", round4(s.effective_diameter_90)},
              {"effective_diameter_sources", s.effective_diameter_sources}};
  if (s.diameter) out["diameter"] = {{"value", s.diameter->value}, {"lower_bound", s.diameter->lower_bound}};
  return out;
}

// ---- communities ----

inline const char* algo_name(CommunityAlgorithm a) { return a == CommunityAlgorithm::girvan_newman ? "gn" : "cnm"; }

inline json partition_json(const DirectedGraph& g, const Partition& p, CommunityAlgorithm algo) {
  json comms = json::array();
  for (const auto& members : p.communities()) {
    json ids = json::array();
    for (NodeId v : members) ids.push_back(g.external_id(v));
    comms.push_back({{"size", members.size()}, {"nodes", ids}});
  }
  for (std::size_t i = 0; i < comms.size(); ++i) comms[i]["id"] = i;
  return {{"algo", algo_name(algo)}, {"modularity", round4(p.modularity)}, {"communities", comms}};
}

inline json community_report_json(const DirectedGraph& g, const CommunityReport& r) {
  json comms = json::array();
  for (const auto& c : r.communities) {
    json ids = json::array();
    for (NodeId v : c.nodes) ids.push_back(g.external_id(v));
    json ranks = json::array();
    for (const auto& m : c.metrics) ranks.push_back(metrics_json(m));
    comms.push_back({{"id", c.id},
                     {"size", c.nodes.size()},
                     {"nodes", ids},
                     {"label", c.label},
                     {"label_share", round4(c.label_share)},
                     {"indivisible", c.indivisible},
                     {"census", census_json(c.census)},
                     {"motif_rank_table", ranks}});
  }
  json params = {{"max_community_size", r.options.max_community_size},
                 {"k", r.options.k},
                 {"gn_node_budget", r.options.gn_node_budget},
                 {"seed", r.options.seed}};
  if (r.options.sampling) params["sampling_probabilities"] = *r.options.sampling;
  return {{"communities", comms}, {"modularity", round4(r.modularity)}, {"algo", algo_name(r.algo)},
          {"parameters", params}};
}

}  // namespace motifscope::report
