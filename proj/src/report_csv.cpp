#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttroute/experiments.hpp"

namespace ttroute {

std::string format_snr(const std::optional<double>& snr_db) {
  if (!snr_db) return "none";
  if (std::isinf(*snr_db)) return "inf";
  return fmt::format("{}", *snr_db);
}

std::string format_node_sequence(std::span<const NodeId> nodes) {
  return fmt::format("{}", fmt::join(nodes, "-"));
}

std::string summary_csv(std::span<const ExperimentSummary> summaries) {
  std::string out = "map,provider,repetitions,r,snr_db,seed,mean_est_cost,mean_true_cost,saving_pct_vs_heuristic\n";
  for (const ExperimentSummary& s : summaries) {
    for (const CellSummary& c : s.cells) {
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", c.map, to_string(c.provider), c.repetitions,
                         c.regression_no, format_snr(c.snr_db), c.seed, c.mean_est_cost, c.mean_true_cost,
                         c.saving_pct_vs_heuristic);
    }
  }
  return out;
}

std::string records_csv(std::span<const ExperimentSummary> summaries) {
  std::string out =
      "map,provider,repetitions,r,snr_db,seed,call_index,source,dest,node_sequence,total_est_cost,total_true_cost,"
      "depleted\n";
  for (const ExperimentSummary& s : summaries) {
    for (const CellSummary& c : s.cells) {
      for (const CallRecord& r : c.records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", c.map, to_string(c.provider), c.repetitions,
                           c.regression_no, format_snr(c.snr_db), c.seed, r.call_index, r.source, r.dest,
                           format_node_sequence(r.nodes), r.total_est_cost, r.total_true_cost, r.depleted ? 1 : 0);
      }
    }
  }
  return out;
}

std::string paths_csv(std::span<const CallRecord> records) {
  std::string out = "call_index,source,dest,node_sequence,total_est_cost,total_true_cost\n";
  for (const CallRecord& r : records) {
    out += fmt::format("{},{},{},{},{},{}\n", r.call_index, r.source, r.dest, format_node_sequence(r.nodes),
                       r.total_est_cost, r.total_true_cost);
  }
  return out;
}

std::string comparison_csv(const TopologyMap& map, const ComparisonReport& report) {
  auto edge_list = [&](const std::vector<EdgeId>& edges) {
    std::string s;
    for (EdgeId e : edges) {
      if (!s.empty()) s += ';';
      s += fmt::format("{}-{}", map.edge(e).from, map.edge(e).to);
    }
    return s;
  };
  std::string out =
      "provider,source,dest,node_sequence,edge_count,total_est_cost,total_true_cost,saving_pct_vs_heuristic,"
      "shared_edges,distinct_edges\n";
  for (std::size_t p = 0; p < ComparisonReport::kProviders.size(); ++p) {
    const PathResult& path = report.paths[p];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(ComparisonReport::kProviders[p]), report.od.first,
                       report.od.second, format_node_sequence(path.nodes), path.edge_count(), path.total_est_cost,
                       report.true_costs[p], report.saving_pct[p], report.shared_edges.size(),
                       edge_list(report.distinct_edges[p]));
  }
  return out;
}

}  // namespace ttroute
