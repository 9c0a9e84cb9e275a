#pragma once
// Small random graphs and an all-pairs shortest path reference.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ttroute/topo_map.hpp"

namespace oracle {

struct RandomGraph {
  ttroute::TopologyMap map;
  std::vector<double> costs;  // by edge id
};

// Connected graph on 2..max_nodes nodes: a random spanning tree plus extra
// links. Costs are integers in [1, 20] so sums are exact in any order.
inline RandomGraph random_connected_graph(std::uint64_t seed, int max_nodes = 9) {
  std::mt19937_64 rng(seed);
  const int n = std::uniform_int_distribution<int>(2, max_nodes)(rng);
  std::vector<ttroute::Node> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({static_cast<ttroute::NodeId>(i), std::uniform_real_distribution<double>(0, 10)(rng),
                     std::uniform_real_distribution<double>(0, 10)(rng), ttroute::NodeKind::port});
  }
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  std::vector<ttroute::Edge> edges;
  auto add = [&](int a, int b) {
    if (a == b || linked[a][b]) return;
    linked[a][b] = linked[b][a] = true;
    edges.push_back({static_cast<ttroute::NodeId>(a), static_cast<ttroute::NodeId>(b), 1.0, 0});
  };
  for (int i = 1; i < n; ++i) add(i, std::uniform_int_distribution<int>(0, i - 1)(rng));
  const int extra = std::uniform_int_distribution<int>(0, n)(rng);
  for (int j = 0; j < extra; ++j) {
    add(std::uniform_int_distribution<int>(0, n - 1)(rng), std::uniform_int_distribution<int>(0, n - 1)(rng));
  }
  std::vector<double> costs;
  for (std::size_t e = 0; e < edges.size(); ++e) costs.push_back(std::uniform_int_distribution<int>(1, 20)(rng));
  return {ttroute::TopologyMap(std::move(nodes), std::move(edges)), std::move(costs)};
}

// Floyd-Warshall distances.
inline std::vector<std::vector<double>> all_pairs(const ttroute::TopologyMap& map, const std::vector<double>& costs) {
  const std::size_t n = map.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t e = 0; e < map.edge_count(); ++e) {
    const auto& edge = map.edge(e);
    d[edge.from][edge.to] = std::min(d[edge.from][edge.to], costs[e]);
    d[edge.to][edge.from] = std::min(d[edge.to][edge.from], costs[e]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

}  // namespace oracle
