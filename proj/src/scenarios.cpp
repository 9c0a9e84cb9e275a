#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "ttroute/experiments.hpp"
#include "ttroute/planner.hpp"
#include "ttroute/seeding.hpp"

namespace ttroute {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::none:
      return "none";
    case ScenarioKind::battery:
      return "battery";
    case ScenarioKind::floor:
      return "floor";
    case ScenarioKind::battery_floor:
      return "battery_floor";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "none") return ScenarioKind::none;
  if (text == "battery") return ScenarioKind::battery;
  if (text == "floor") return ScenarioKind::floor;
  if (text == "battery_floor" || text == "default") return ScenarioKind::battery_floor;
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

WorldParams Scenario::apply(WorldParams params) const {
  if (!battery_degradation) {
    params.battery.beta = 0.0;
    params.battery.hump_enabled = false;
  }
  return params;
}

std::vector<ZoneId> zones_by_centrality(const TopologyMap& map) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Node& n : map.nodes()) {
    min_x = std::min(min_x, n.x);
    max_x = std::max(max_x, n.x);
    min_y = std::min(min_y, n.y);
    max_y = std::max(max_y, n.y);
  }
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);

  struct Acc {
    double x{0.0}, y{0.0};
    int n{0};
  };
  std::map<ZoneId, Acc> acc;
  for (const Edge& e : map.edges()) {
    Acc& a = acc[e.zone_id];
    a.x += 0.5 * (map.node(e.from).x + map.node(e.to).x);
    a.y += 0.5 * (map.node(e.from).y + map.node(e.to).y);
    ++a.n;
  }
  std::vector<std::pair<double, ZoneId>> ranked;
  for (const auto& [zone, a] : acc) {
    ranked.emplace_back(std::hypot(a.x / a.n - cx, a.y / a.n - cy), zone);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<ZoneId> out;
  for (const auto& [dist, zone] : ranked) out.push_back(zone);
  return out;
}

std::vector<ZoneId> zones_by_traffic(const TopologyMap& map, std::span<const OdPair> od_list, double nominal_speed) {
  HeuristicProvider heuristic(map, nominal_speed);
  std::map<ZoneId, int> traffic;
  for (ZoneId z : map.zone_ids()) traffic[z] = 0;
  for (const auto& [s, d] : od_list) {
    for (EdgeId e : plan(map, heuristic, s, d).edges) ++traffic[map.edge(e).zone_id];
  }
  std::vector<std::pair<int, ZoneId>> ranked;
  for (const auto& [zone, n] : traffic) ranked.emplace_back(-n, zone);
  std::sort(ranked.begin(), ranked.end());
  std::vector<ZoneId> out;
  for (const auto& [n, zone] : ranked) out.push_back(zone);
  return out;
}

Scenario make_scenario(ScenarioKind kind, const TopologyMap& map) {
  Scenario s;
  s.kind = kind;
  s.initial = FloorCondition::uniform(map, FloorLevel::smooth);
  s.battery_degradation = kind == ScenarioKind::battery || kind == ScenarioKind::battery_floor;

  if (kind == ScenarioKind::floor || kind == ScenarioKind::battery_floor) {
    const std::vector<OdPair> od = default_od_list(map, derive_seed(map.meta().seed, "od-list"));
    const std::vector<ZoneId> zones = zones_by_traffic(map, od, WorldParams{}.nominal_speed);
    if (zones.size() < 8) throw std::invalid_argument("floor scenarios need at least 8 zones");
    s.initial.set(zones[6], FloorLevel::light);
    s.initial.set(zones[7], FloorLevel::light);
    // Every 10 calls the next busiest zone wears to heavy roughness.
    for (int i = 0; i < 4; ++i) s.events.push_back({10 * (i + 1), zones[i], FloorLevel::heavy});
  }
  return s;
}

std::vector<OdPair> default_od_list(const TopologyMap& map, std::uint64_t seed, std::size_t count,
                                    std::size_t min_hops) {
  std::vector<NodeId> candidates = map.ports();
  if (candidates.size() < 2) {
    candidates.clear();
    for (const Node& n : map.nodes()) candidates.push_back(n.id);
  }
  std::vector<OdPair> pairs;
  for (std::size_t hops = min_hops;; --hops) {
    pairs.clear();
    for (NodeId a : candidates) {
      const auto dist = hop_distances(map, a);
      for (NodeId b : candidates) {
        if (a < b && dist[b] >= hops) pairs.emplace_back(a, b);
      }
    }
    if (pairs.size() >= count || hops <= 1) break;
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (pairs.size() > count) pairs.resize(count);
  // Alternate direction so both ends serve as sources.
  for (std::size_t i = 1; i < pairs.size(); i += 2) std::swap(pairs[i].first, pairs[i].second);
  return pairs;
}

}  // namespace ttroute
