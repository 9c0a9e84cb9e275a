#pragma once

#include <span>
#include <vector>

#include "ttroute/topo_map.hpp"

namespace ttroute {

/// Sum of a path's per-edge costs, accumulated in path order.
double path_total_cost(std::span<const double> costs);

/// A planned route: nodes[i] and nodes[i+1] are joined by edges[i], whose
/// cost was estimated as est_costs[i] at traversal depth depths[i].
struct PathResult {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  std::vector<double> est_costs;
  std::vector<int> depths;
  double total_est_cost{0.0};

  bool empty() const { return edges.empty(); }
  std::size_t edge_count() const { return edges.size(); }
};

}  // namespace ttroute
