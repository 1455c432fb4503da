#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motifscope/community.hpp"
#include "motifscope/graph.hpp"
#include "motifscope/ingest.hpp"
#include "motifscope/metrics.hpp"
#include "motifscope/motif.hpp"
#include "motifscope/null_model.hpp"
#include "motifscope/report.hpp"
#include "motifscope/stats.hpp"

namespace motifscope::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Everything a subcommand needs, as parsed from argv.
struct RunConfig {
  std::string subcommand;
  std::string edges_path;
  std::string meta_path;
  unsigned k = 3;
  std::uint64_t seed = 42;
  unsigned ensembles = 100;
  unsigned swaps_per_edge = 10;
  std::vector<double> sample;
  std::string algo = "cnm";
  std::size_t max_size = 1000;
  std::size_t gn_budget = 2000;
  std::optional<std::size_t> target;
  std::string format = "csv";
  std::string output;
  std::string hist_path;
  std::string json_path;
  std::size_t sources = 1000;
  bool exact_diameter = false;
  double diameter_budget_seconds = 0.0;
  unsigned threads = 0;
};

namespace detail {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline DirectedGraph load_graph(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  auto pairs = parse_edge_list(in);
  auto built = build_from_edges(pairs);
  if (built.self_loops_dropped || built.duplicates_dropped)
    err << "note: dropped " << built.self_loops_dropped << " self-loops and " << built.duplicates_dropped
        << " duplicate edges\n";
  return std::move(built.graph);
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << text;
  if (!f) throw DataError("write failed for " + path);
}

inline std::optional<DepthProbabilities> sampling(const RunConfig& c) {
  if (c.sample.empty()) return std::nullopt;
  return c.sample;
}

inline int run_config(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const bool json_out = c.format == "json";
  if (c.subcommand == "stats") {
    const auto g = load_graph(c.edges_path, err);
    SummaryOptions opt;
    opt.sample_sources = c.sources;
    opt.seed = c.seed;
    opt.exact_diameter = c.exact_diameter;
    opt.diameter_budget = std::chrono::milliseconds(static_cast<long long>(c.diameter_budget_seconds * 1000));
    opt.threads = c.threads;
    const auto s = summarize(g, opt);
    write_text(c.output, report::summary_text(s), out);
    if (!c.json_path.empty()) write_text(c.json_path, report::summary_json(s).dump(2) + "\n", out);
  } else if (c.subcommand == "catalog") {
    const auto& cat = catalog(c.k);
    write_text(c.output, json_out ? report::catalog_json(cat).dump(2) + "\n" : report::catalog_csv(cat), out);
  } else if (c.subcommand == "census") {
    const auto g = load_graph(c.edges_path, err);
    const auto probs = sampling(c);
    const auto r = probs ? sampled_census(g, c.k, *probs, c.seed, c.threads) : census(g, c.k, c.threads);
    write_text(c.output, json_out ? report::census_json(r).dump(2) + "\n" : report::census_csv(r), out);
    if (!c.hist_path.empty()) write_text(c.hist_path, report::histogram_csv(r), out);
  } else if (c.subcommand == "metrics") {
    const auto rows = metrics_table(catalog(c.k));
    if (json_out) {
      auto arr = report::json::array();
      for (const auto& m : rows) arr.push_back(report::metrics_json(m));
      write_text(c.output, report::json{{"k", c.k}, {"classes", arr}}.dump(2) + "\n", out);
    } else {
      write_text(c.output, report::metrics_csv(rows), out);
    }
  } else if (c.subcommand == "significance") {
    const auto g = load_graph(c.edges_path, err);
    SignificanceOptions opt;
    opt.ensembles = c.ensembles;
    opt.swaps_per_edge = c.swaps_per_edge;
    opt.seed = c.seed;
    opt.sampling = sampling(c);
    opt.threads = c.threads;
    const auto r = significance(g, c.k, opt);
    write_text(c.output, json_out ? report::significance_json(r).dump(2) + "\n" : report::significance_csv(r), out);
  } else if (c.subcommand == "communities") {
    const auto g = load_graph(c.edges_path, err);
    const auto u = UndirectedView::of(g);
    Partition p;
    CommunityAlgorithm algo;
    if (c.algo == "gn") {
      algo = CommunityAlgorithm::girvan_newman;
      GirvanNewmanOptions opt;
      opt.target_communities = c.target;
      opt.threads = c.threads;
      p = girvan_newman(u, opt).partition;
    } else {
      algo = CommunityAlgorithm::cnm;
      p = cnm_greedy(u).partition;
    }
    write_text(c.output, report::partition_json(g, p, algo).dump(2) + "\n", out);
  } else if (c.subcommand == "pipeline") {
    const auto g = load_graph(c.edges_path, err);
    std::unordered_map<ExternalId, std::string> labels;
    if (!c.meta_path.empty()) {
      std::ifstream in(c.meta_path);
      if (!in) throw DataError("cannot open " + c.meta_path);
      labels = group_labels(parse_metadata(in));
    }
    PipelineOptions opt;
    opt.algo = c.algo == "gn" ? CommunityAlgorithm::girvan_newman : CommunityAlgorithm::cnm;
    opt.max_community_size = c.max_size;
    opt.k = c.k;
    opt.gn_node_budget = c.gn_budget;
    opt.sampling = sampling(c);
    opt.seed = c.seed;
    opt.threads = c.threads;
    const auto r = community_pipeline(g, labels, opt);
    write_text(c.output, report::community_report_json(g, r).dump(2) + "\n", out);
  }
  return ok;
}

}  // namespace detail

/// Parses argv and runs the chosen subcommand. Returns 0 on success, 1 on a
/// usage error, 2 on a data error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"motifscope: directed motif analysis for co-purchasing networks", "motifscope"};
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "Worker threads (default: MOTIFSCOPE_THREADS or all cores)");

  const auto k_check = CLI::IsMember({3u, 4u});
  const auto prob_check = CLI::Range(0.0, 1.0);
  auto add_k = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--k", c.k, "Motif order (3 or 4)")->check(k_check);
    if (required) o->required();
  };
  auto add_edges = [&](CLI::App* s) {
    s->add_option("edges", c.edges_path, "SNAP edge list")->required()->check(CLI::ExistingFile);
  };
  auto add_output = [&](CLI::App* s, bool with_format) {
    s->add_option("--output,-o", c.output, "Output file (default: stdout)");
    if (with_format) s->add_option("--out", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_sample = [&](CLI::App* s) {
    s->add_option("--sample", c.sample, "RAND-ESU per-depth probabilities, comma separated (one per node)")
        ->delimiter(',')
        ->check(prob_check);
  };

  auto* stats = app.add_subcommand("stats", "Global graph statistics");
  add_edges(stats);
  stats->add_option("--sources", c.sources, "BFS sources sampled for the effective diameter")
      ->check(CLI::PositiveNumber);
  stats->add_option("--seed", c.seed, "Random seed");
  stats->add_flag("--exact-diameter", c.exact_diameter, "Also compute the exact diameter (all-source BFS)");
  stats->add_option("--diameter-budget", c.diameter_budget_seconds,
                    "Seconds allowed for the exact diameter; 0 = unlimited");
  stats->add_option("--json", c.json_path, "Also write the summary as JSON");
  add_output(stats, false);

  auto* cat = app.add_subcommand("catalog", "Motif class catalog");
  add_k(cat, true);
  add_output(cat, true);

  auto* cen = app.add_subcommand("census", "Motif census");
  add_edges(cen);
  add_k(cen, true);
  add_sample(cen);
  cen->add_option("--seed", c.seed, "Random seed for sampling");
  cen->add_option("--hist", c.hist_path, "Write class_id,count histogram data");
  add_output(cen, true);

  auto* met = app.add_subcommand("metrics", "Purchasability and motif rank per class");
  add_k(met, true);
  add_output(met, true);

  auto* sig = app.add_subcommand("significance", "z-scores against degree-preserving rewired graphs");
  add_edges(sig);
  add_k(sig, true);
  sig->add_option("--ensembles", c.ensembles, "Number of rewired graphs")->check(CLI::Range(2u, 1000000u));
  sig->add_option("--swaps-per-edge", c.swaps_per_edge, "Attempted swaps per edge")->check(CLI::PositiveNumber);
  sig->add_option("--seed", c.seed, "Random seed");
  add_sample(sig);
  add_output(sig, true);

  auto* com = app.add_subcommand("communities", "Community detection on the undirected projection");
  add_edges(com);
  com->add_option("--algo", c.algo, "gn or cnm")->check(CLI::IsMember({"gn", "cnm"}));
  com->add_option("--target", c.target, "Girvan-Newman: stop at this many communities")->check(CLI::PositiveNumber);
  add_output(com, false);

  auto* pipe = app.add_subcommand("pipeline", "Recursive community split followed by per-community census");
  add_edges(pipe);
  pipe->add_option("--meta", c.meta_path, "Product metadata file")->check(CLI::ExistingFile);
  pipe->add_option("--algo", c.algo, "gn or cnm")->check(CLI::IsMember({"gn", "cnm"}));
  pipe->add_option("--max-size", c.max_size, "Largest community left unsplit")->check(CLI::PositiveNumber);
  add_k(pipe, false);
  pipe->add_option("--gn-budget", c.gn_budget, "Largest community handed to Girvan-Newman")
      ->check(CLI::PositiveNumber);
  add_sample(pipe);
  pipe->add_option("--seed", c.seed, "Random seed for sampling");
  add_output(pipe, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (!c.sample.empty() && c.sample.size() != c.k) {
    err << "--sample needs exactly " << c.k << " probabilities\n";
    return usage_error;
  }
  for (double p : c.sample)
    if (!(p > 0.0)) {
      err << "--sample probabilities must be positive\n";
      return usage_error;
    }
  if (c.subcommand == "pipeline" && c.max_size < c.k) {
    err << "--max-size must be at least k\n";
    return usage_error;
  }

  try {
    return detail::run_config(c, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const detail::DataError& e) {
    err << "error: " << e.what() << '\n';
  }
  return data_error;
}

}  // namespace motifscope::cli
