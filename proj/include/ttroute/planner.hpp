#pragma once
/**
 * Dijkstra over a topology map where edge weights are requested from a
 * CostProvider at the moment a node is settled.
 *
 * Settling u fixes k = 1 + (number of predecessors of u back to the
 * source). Each unsettled neighbour v is then priced by the provider with
 * that k, the cost of the edge that reached u, and the chain of costs along
 * the tree path, and relaxed if d[u] + w(u,v) < d[v]. Each directed link is
 * therefore priced at most once per planning call, and the price is not
 * revisited if u's predecessor would later change.
 *
 * With depth-dependent costs the label-setting argument behind Dijkstra's
 * optimality no longer holds; with a frozen provider the result is optimal.
 * Queue ties go to the smaller node id.
 */

#include <span>
#include <stdexcept>
#include <vector>

#include "ttroute/cost_provider.hpp"
#include "ttroute/path_result.hpp"
#include "ttroute/topo_map.hpp"

namespace ttroute {

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlannerLabels {
  std::vector<double> d;
  std::vector<NodeId> pi;  // pi[v] == v marks "no predecessor"
  std::vector<bool> settled;
  /// Estimated cost of the edge (pi[v], v).
  std::vector<double> in_cost;
};

PathResult plan(const TopologyMap& map, CostProvider& provider, NodeId source, NodeId dest);

/// Same as plan() but also returns the final labels.
PathResult plan(const TopologyMap& map, CostProvider& provider, NodeId source, NodeId dest, PlannerLabels& labels);

struct BruteForceResult {
  std::vector<NodeId> nodes;
  double total{0.0};
};

/// Exhaustive simple-path enumeration under fixed per-edge costs (indexed
/// by EdgeId). Ties go to the lexicographically smallest node sequence.
/// Meant for maps of about a dozen nodes.
BruteForceResult brute_force_shortest(const TopologyMap& map, std::span<const double> frozen_costs, NodeId source,
                                      NodeId dest);

}  // namespace ttroute
