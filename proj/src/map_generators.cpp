#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ttroute/seeding.hpp"
#include "ttroute/topo_map.hpp"

namespace ttroute {
namespace {

class LinkBuilder {
 public:
  LinkBuilder(std::uint64_t seed, double detour_fraction) : rng_(seed), detour_fraction_(detour_fraction) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& rng() { return rng_; }

  void link(NodeId a, NodeId b, double base_length, double max_detour) {
    // Both draws are always taken so the stream does not depend on the outcome.
    const double winds = uniform(0.0, 1.0);
    const double detour = uniform(0.0, 1.0) * max_detour;
    edges.push_back(Edge{a, b, base_length * (1.0 + (winds < detour_fraction_ ? detour : 0.0)), 0});
  }

  std::vector<Edge> edges;

 private:
  std::mt19937_64 rng_;
  double detour_fraction_;
};

void assign_kinds_by_degree(std::vector<Node>& nodes, const std::vector<Edge>& edges) {
  std::vector<int> degree(nodes.size(), 0);
  for (const Edge& e : edges) {
    ++degree[e.from];
    ++degree[e.to];
  }
  for (Node& n : nodes) n.kind = degree[n.id] <= 2 ? NodeKind::port : NodeKind::bifurcation;
}

double distance(const Node& a, const Node& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Parallel aisles along rack rows whose links wind around obstacles, so
// each is longer than the straight line between its ends. Straight cross
// aisles join neighbouring rows at both ends and every `cross_every`
// columns in between.
TopologyMap winding_racks(const GeneratorParams& p, std::uint64_t seed) {
  LinkBuilder lb(seed, p.detour_fraction);
  std::vector<Node> nodes;
  const auto id = [&](int r, int c) { return static_cast<NodeId>(r * p.cols + c); };
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      nodes.push_back(Node{id(r, c), c * p.spacing, r * p.spacing, NodeKind::port});
    }
  }
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c + 1 < p.cols; ++c) lb.link(id(r, c), id(r, c + 1), p.spacing, p.max_detour);
  }
  for (int r = 0; r + 1 < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      if (c % p.cross_every == 0 || c == p.cols - 1) lb.link(id(r, c), id(r + 1, c), p.spacing, 0.1 * p.max_detour);
    }
  }
  assign_kinds_by_degree(nodes, lb.edges);
  auto edges = bin_zones(nodes, std::move(lb.edges), p.zone_cols, p.zone_rows);
  return TopologyMap(std::move(nodes), std::move(edges), MapMeta{"winding_racks", seed});
}

bool connected_without(std::size_t n, const std::vector<Edge>& edges, const std::vector<bool>& removed) {
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (removed[i]) continue;
    adj[edges[i].from].push_back(edges[i].to);
    adj[edges[i].to].push_back(edges[i].from);
  }
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

// Jittered grid whose links are partially blocked by randomly placed racks.
TopologyMap random_racks(const GeneratorParams& p, std::uint64_t seed) {
  LinkBuilder lb(seed, p.detour_fraction);
  std::vector<Node> nodes;
  const auto id = [&](int r, int c) { return static_cast<NodeId>(r * p.cols + c); };
  const double jitter = 0.15 * p.spacing;
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      nodes.push_back(Node{id(r, c), c * p.spacing + lb.uniform(-jitter, jitter),
                           r * p.spacing + lb.uniform(-jitter, jitter), NodeKind::port});
    }
  }
  std::vector<Edge> candidates;
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      if (c + 1 < p.cols) candidates.push_back(Edge{id(r, c), id(r, c + 1), 0.0, 0});
      if (r + 1 < p.rows) candidates.push_back(Edge{id(r, c), id(r + 1, c), 0.0, 0});
    }
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), lb.rng());

  const auto target = static_cast<std::size_t>(std::floor(p.rack_fraction * candidates.size()));
  std::vector<bool> removed(candidates.size(), false);
  std::size_t removed_count = 0;
  for (std::size_t idx : order) {
    if (removed_count >= target) break;
    removed[idx] = true;
    if (connected_without(nodes.size(), candidates, removed)) {
      ++removed_count;
    } else {
      removed[idx] = false;
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (removed[i]) continue;
    const Edge& e = candidates[i];
    lb.link(e.from, e.to, distance(nodes[e.from], nodes[e.to]), p.max_detour);
  }
  assign_kinds_by_degree(nodes, lb.edges);
  auto edges = bin_zones(nodes, std::move(lb.edges), p.zone_cols, p.zone_rows);
  return TopologyMap(std::move(nodes), std::move(edges), MapMeta{"random_racks", seed});
}

// Spokes radiating from a central hub, crossed by circular rings every
// `cross_every` levels and always at the outermost level. Ring links follow
// the arc, so they are longer than the chord between their ends, and any
// link may also wind.
TopologyMap hub(const GeneratorParams& p, std::uint64_t seed) {
  LinkBuilder lb(seed, p.detour_fraction);
  const int spokes = p.cols;
  const int levels = p.rows;
  std::vector<Node> nodes;
  nodes.push_back(Node{0, 0.0, 0.0, NodeKind::bifurcation});
  const double sector = 2.0 * std::numbers::pi / spokes;
  const double rotation = lb.uniform(0.0, sector);
  const auto id = [&](int s, int l) { return static_cast<NodeId>(1 + s * levels + (l - 1)); };
  for (int s = 0; s < spokes; ++s) {
    const double theta = rotation + s * sector;
    for (int l = 1; l <= levels; ++l) {
      const double radius = l * p.spacing;
      nodes.push_back(Node{id(s, l), radius * std::cos(theta), radius * std::sin(theta), NodeKind::port});
    }
  }
  for (int s = 0; s < spokes; ++s) {
    lb.link(0, id(s, 1), p.spacing, p.max_detour);
    for (int l = 1; l < levels; ++l) lb.link(id(s, l), id(s, l + 1), p.spacing, p.max_detour);
  }
  for (int l = 1; l <= levels; ++l) {
    if (l % p.cross_every != 0 && l != levels) continue;
    for (int s = 0; s < spokes; ++s) lb.link(id(s, l), id((s + 1) % spokes, l), l * p.spacing * sector, p.max_detour);
  }
  assign_kinds_by_degree(nodes, lb.edges);
  nodes[0].kind = NodeKind::bifurcation;
  for (int s = 0; s < spokes; ++s) nodes[id(s, levels)].kind = NodeKind::port;
  auto edges = bin_zones(nodes, std::move(lb.edges), p.zone_cols, p.zone_rows);
  return TopologyMap(std::move(nodes), std::move(edges), MapMeta{"hub", seed});
}

}  // namespace

std::string_view to_string(MapFamily family) {
  switch (family) {
    case MapFamily::winding_racks:
      return "winding_racks";
    case MapFamily::random_racks:
      return "random_racks";
    case MapFamily::hub:
      return "hub";
  }
  return "unknown";
}

MapFamily parse_map_family(std::string_view text) {
  if (text == "winding_racks" || text == "winding") return MapFamily::winding_racks;
  if (text == "random_racks" || text == "random") return MapFamily::random_racks;
  if (text == "hub") return MapFamily::hub;
  throw std::invalid_argument("unknown map family '" + std::string(text) + "'");
}

void GeneratorParams::validate(MapFamily family) const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("spacing must be positive");
  if (!(max_detour >= 0.0) || max_detour > 2.0) throw std::invalid_argument("max_detour must be in [0, 2]");
  if (zone_cols < 1 || zone_rows < 1) throw std::invalid_argument("zone grid must be at least 1x1");
  if (cross_every < 1) throw std::invalid_argument("cross_every must be >= 1");
  if (!(detour_fraction >= 0.0 && detour_fraction <= 1.0)) {
    throw std::invalid_argument("detour_fraction must be in [0, 1]");
  }
  switch (family) {
    case MapFamily::winding_racks:
      if (rows < 2) throw std::invalid_argument("winding_racks needs at least 2 rack rows");
      if (cols < 3) throw std::invalid_argument("winding_racks needs at least 3 nodes per aisle");
      break;
    case MapFamily::random_racks:
      if (rows < 2 || cols < 2) throw std::invalid_argument("random_racks needs at least a 2x2 grid");
      if (!(rack_fraction >= 0.0 && rack_fraction < 1.0)) {
        throw std::invalid_argument("rack_fraction must be in [0, 1)");
      }
      break;
    case MapFamily::hub:
      if (cols < 4) throw std::invalid_argument("hub needs at least 4 spokes");
      if (rows < 2) throw std::invalid_argument("hub needs at least 2 ring levels");
      break;
  }
}

GeneratorParams default_params(MapFamily family) {
  GeneratorParams p;
  p.rows = 8;
  p.cols = 12;
  p.detour_fraction = 0.3;
  switch (family) {
    case MapFamily::winding_racks:
      // One floor zone per aisle.
      p.max_detour = 0.5;
      p.zone_cols = 1;
      p.zone_rows = 8;
      break;
    case MapFamily::random_racks:
      p.max_detour = 0.6;
      p.rack_fraction = 0.05;
      p.zone_cols = 2;
      p.zone_rows = 8;
      break;
    case MapFamily::hub:
      p.rows = 6;
      p.cols = 8;
      p.max_detour = 0.7;
      p.detour_fraction = 0.6;
      p.cross_every = 1;
      p.zone_cols = 4;
      p.zone_rows = 4;
      break;
  }
  return p;
}

TopologyMap builtin_map(MapFamily family, const GeneratorParams& params, std::uint64_t seed) {
  params.validate(family);
  switch (family) {
    case MapFamily::winding_racks:
      return winding_racks(params, seed);
    case MapFamily::random_racks:
      return random_racks(params, seed);
    case MapFamily::hub:
      return hub(params, seed);
  }
  throw std::invalid_argument("unknown map family");
}

std::uint64_t representative_map_seed(int index) {
  return derive_seed(static_cast<std::uint64_t>(index), "representative-map");
}

TopologyMap representative_map(int index, std::uint64_t seed) {
  MapFamily family;
  switch (index) {
    case 1:
      family = MapFamily::winding_racks;
      break;
    case 2:
      family = MapFamily::random_racks;
      break;
    case 3:
      family = MapFamily::hub;
      break;
    default:
      throw std::invalid_argument("representative maps are numbered 1..3");
  }
  if (seed == 0) seed = representative_map_seed(index);
  const TopologyMap generated = builtin_map(family, default_params(family), seed);
  return TopologyMap(generated.nodes(), generated.edges(),
                     MapMeta{"map" + std::to_string(index) + "-" + std::string(to_string(family)), seed});
}

}  // namespace ttroute
