#include "ttroute/topo_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace ttroute {

TopologyMap::TopologyMap(std::vector<Node> nodes, std::vector<Edge> edges, MapMeta meta)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), meta_(std::move(meta)) {
  if (nodes_.empty()) throw MapValidationError("map has no nodes");

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != i) {
      throw MapValidationError("node ids must be dense and ordered; expected " + std::to_string(i) +
                               ", got " + std::to_string(n.id));
    }
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
      throw MapValidationError("node " + std::to_string(i) + " has non-finite coordinates");
    }
  }

  adjacency_.resize(nodes_.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const std::string tag = "edge (" + std::to_string(edge.from) + "," + std::to_string(edge.to) + ")";
    if (edge.from >= nodes_.size() || edge.to >= nodes_.size()) {
      throw MapValidationError(tag + " references an unknown node");
    }
    if (edge.from == edge.to) throw MapValidationError(tag + " is a self loop");
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw MapValidationError(tag + " has non-positive length");
    }
    const auto key = std::minmax(edge.from, edge.to);
    if (!seen.insert(key).second) throw MapValidationError(tag + " is duplicated");
    adjacency_[edge.from].push_back({edge.to, e});
    adjacency_[edge.to].push_back({edge.from, e});
  }

  if (!is_connected(*this)) throw MapValidationError("map is not connected");
}

const Node& TopologyMap::node(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node " + std::to_string(id));
  return nodes_[id];
}

const Edge& TopologyMap::edge(EdgeId id) const {
  if (id >= edges_.size()) throw std::out_of_range("unknown edge " + std::to_string(id));
  return edges_[id];
}

const std::vector<Adjacent>& TopologyMap::neighbors(NodeId id) const {
  if (id >= adjacency_.size()) throw std::out_of_range("unknown node " + std::to_string(id));
  return adjacency_[id];
}

std::optional<EdgeId> TopologyMap::find_edge(NodeId u, NodeId v) const {
  if (u >= adjacency_.size()) return std::nullopt;
  for (const Adjacent& a : adjacency_[u]) {
    if (a.to == v) return a.edge;
  }
  return std::nullopt;
}

EdgeId TopologyMap::edge_between(NodeId u, NodeId v) const {
  if (auto e = find_edge(u, v)) return *e;
  throw std::out_of_range("no edge between " + std::to_string(u) + " and " + std::to_string(v));
}

double TopologyMap::euclidean(NodeId u, NodeId v) const {
  const Node& a = node(u);
  const Node& b = node(v);
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<NodeId> TopologyMap::ports() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::port) out.push_back(n.id);
  }
  return out;
}

std::vector<ZoneId> TopologyMap::zone_ids() const {
  std::vector<ZoneId> zones;
  zones.reserve(edges_.size());
  for (const Edge& e : edges_) zones.push_back(e.zone_id);
  std::sort(zones.begin(), zones.end());
  zones.erase(std::unique(zones.begin(), zones.end()), zones.end());
  return zones;
}

bool TopologyMap::operator==(const TopologyMap& other) const {
  return nodes_ == other.nodes_ && edges_ == other.edges_ && meta_ == other.meta_;
}

std::vector<std::size_t> hop_distances(const TopologyMap& map, NodeId source) {
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(map.node_count(), kUnreached);
  std::deque<NodeId> frontier{source};
  dist.at(source) = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (const Adjacent& a : map.neighbors(u)) {
      if (dist[a.to] == kUnreached) {
        dist[a.to] = dist[u] + 1;
        frontier.push_back(a.to);
      }
    }
  }
  return dist;
}

bool is_connected(const TopologyMap& map) {
  if (map.node_count() == 0) return false;
  const auto dist = hop_distances(map, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
    return d == std::numeric_limits<std::size_t>::max();
  });
}

double heuristic_cost(const TopologyMap& map, NodeId u, NodeId v, double nominal_speed) {
  if (!(nominal_speed > 0.0)) throw std::invalid_argument("nominal speed must be positive");
  if (!map.find_edge(u, v)) {
    throw std::out_of_range("heuristic_cost: no edge between " + std::to_string(u) + " and " +
                            std::to_string(v));
  }
  return map.euclidean(u, v) / nominal_speed;
}

std::vector<Edge> bin_zones(const std::vector<Node>& nodes, std::vector<Edge> edges, int zone_cols,
                            int zone_rows) {
  if (zone_cols < 1 || zone_rows < 1) throw std::invalid_argument("zone grid must be at least 1x1");
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Node& n : nodes) {
    min_x = std::min(min_x, n.x);
    max_x = std::max(max_x, n.x);
    min_y = std::min(min_y, n.y);
    max_y = std::max(max_y, n.y);
  }
  const double width = std::max(max_x - min_x, 1e-9);
  const double height = std::max(max_y - min_y, 1e-9);
  for (Edge& e : edges) {
    const double mx = 0.5 * (nodes.at(e.from).x + nodes.at(e.to).x);
    const double my = 0.5 * (nodes.at(e.from).y + nodes.at(e.to).y);
    const int ix = std::clamp(static_cast<int>((mx - min_x) / width * zone_cols), 0, zone_cols - 1);
    const int iy = std::clamp(static_cast<int>((my - min_y) / height * zone_rows), 0, zone_rows - 1);
    e.zone_id = iy * zone_cols + ix;
  }
  return edges;
}

}  // namespace ttroute
