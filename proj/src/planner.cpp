#include "ttroute/planner.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace ttroute {

double path_total_cost(std::span<const double> costs) {
  double total = 0.0;
  for (double c : costs) total += c;
  return total;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QueueEntry = std::pair<double, NodeId>;

void check_node(const TopologyMap& map, NodeId n, const char* role) {
  if (n >= map.node_count()) throw std::out_of_range(std::string(role) + " node " + std::to_string(n) + " not in map");
}

// X(0) = 0, X(1) .. X(k-1) along the tree path from the source to u.
std::vector<double> prefix_costs(const PlannerLabels& labels, NodeId u) {
  std::vector<double> chain;
  for (NodeId n = u; labels.pi[n] != n; n = labels.pi[n]) chain.push_back(labels.in_cost[n]);
  chain.push_back(0.0);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

PathResult plan(const TopologyMap& map, CostProvider& provider, NodeId source, NodeId dest) {
  PlannerLabels labels;
  return plan(map, provider, source, dest, labels);
}

PathResult plan(const TopologyMap& map, CostProvider& provider, NodeId source, NodeId dest, PlannerLabels& labels) {
  check_node(map, source, "source");
  check_node(map, dest, "destination");

  const std::size_t n = map.node_count();
  labels.d.assign(n, kInf);
  labels.pi.resize(n);
  for (NodeId v = 0; v < n; ++v) labels.pi[v] = v;
  labels.settled.assign(n, false);
  labels.in_cost.assign(n, 0.0);
  std::vector<int> depth_of(n, 0);

  PathResult result;
  if (source == dest) {
    labels.d[source] = 0.0;
    result.nodes = {source};
    return result;
  }

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  labels.d[source] = 0.0;
  queue.push({0.0, source});

  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (labels.settled[u] || du > labels.d[u]) continue;
    labels.settled[u] = true;
    if (u == dest) break;

    const std::vector<double> prefix = prefix_costs(labels, u);
    const int k = static_cast<int>(prefix.size());  // npred + 1
    const double prev_cost = labels.in_cost[u];

    for (const Adjacent& adj : map.neighbors(u)) {
      const NodeId v = adj.to;
      if (labels.settled[v]) continue;
      EdgeQuery query{u, v, adj.edge, k, prev_cost, prefix, std::nullopt};
      const double w = estimate_edge_cost(provider, map, query);
      if (labels.d[v] > labels.d[u] + w) {
        labels.d[v] = labels.d[u] + w;
        labels.pi[v] = u;
        labels.in_cost[v] = w;
        depth_of[v] = k;
        queue.push({labels.d[v], v});
      }
    }
  }

  if (!labels.settled[dest]) {
    throw UnreachableError("destination " + std::to_string(dest) + " unreachable from " + std::to_string(source));
  }

  for (NodeId v = dest; v != source; v = labels.pi[v]) {
    result.nodes.push_back(v);
    result.edges.push_back(map.edge_between(labels.pi[v], v));
    result.est_costs.push_back(labels.in_cost[v]);
    result.depths.push_back(depth_of[v]);
  }
  result.nodes.push_back(source);
  std::reverse(result.nodes.begin(), result.nodes.end());
  std::reverse(result.edges.begin(), result.edges.end());
  std::reverse(result.est_costs.begin(), result.est_costs.end());
  std::reverse(result.depths.begin(), result.depths.end());
  result.total_est_cost = path_total_cost(result.est_costs);
  return result;
}

BruteForceResult brute_force_shortest(const TopologyMap& map, std::span<const double> frozen_costs, NodeId source,
                                      NodeId dest) {
  check_node(map, source, "source");
  check_node(map, dest, "destination");
  if (frozen_costs.size() != map.edge_count()) throw std::invalid_argument("need one frozen cost per edge");

  BruteForceResult best;
  best.total = kInf;
  std::vector<NodeId> path{source};
  std::vector<bool> on_path(map.node_count(), false);
  on_path[source] = true;

  // Sums accumulate in path order, matching the planner's d[] labels.
  std::function<void(NodeId, double)> walk = [&](NodeId u, double cost) {
    if (u == dest) {
      if (cost < best.total || (cost == best.total && path < best.nodes)) {
        best.total = cost;
        best.nodes = path;
      }
      return;
    }
    for (const Adjacent& adj : map.neighbors(u)) {
      if (on_path[adj.to]) continue;
      on_path[adj.to] = true;
      path.push_back(adj.to);
      walk(adj.to, cost + frozen_costs[adj.edge]);
      path.pop_back();
      on_path[adj.to] = false;
    }
  };
  walk(source, 0.0);

  if (best.nodes.empty()) {
    throw UnreachableError("destination " + std::to_string(dest) + " unreachable from " + std::to_string(source));
  }
  return best;
}

}  // namespace ttroute
