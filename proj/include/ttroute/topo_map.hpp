#pragma once
/**
 * Warehouse floor topology maps.
 *
 * A map is an undirected graph whose nodes are ports (pick/drop spots) and
 * bifurcations, and whose edges are the physical links between them. Each
 * edge carries its traversed length, which may exceed the straight-line
 * distance between its endpoints (winding aisles), and a floor zone id.
 *
 * Coordinates and lengths are in meters. A TopologyMap is immutable after
 * construction and may be shared freely between threads.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttroute {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using ZoneId = int;

enum class NodeKind : std::uint8_t { port, bifurcation };

struct Node {
  NodeId id{0};
  double x{0.0};
  double y{0.0};
  NodeKind kind{NodeKind::bifurcation};

  bool operator==(const Node&) const = default;
};

struct Edge {
  NodeId from{0};
  NodeId to{0};
  double length{0.0};
  ZoneId zone_id{0};

  NodeId other(NodeId n) const { return n == from ? to : from; }
  bool operator==(const Edge&) const = default;
};

struct Adjacent {
  NodeId to{0};
  EdgeId edge{0};
};

struct MapMeta {
  std::string name;
  std::uint64_t seed{0};

  bool operator==(const MapMeta&) const = default;
};

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed map document.
class MapParseError : public MapError {
 public:
  using MapError::MapError;
};

/// Well-formed document describing an invalid graph.
class MapValidationError : public MapError {
 public:
  using MapError::MapError;
};

class TopologyMap {
 public:
  /// Validates and takes ownership. Node ids must be dense and equal to
  /// their position; the graph must be connected with no duplicate links.
  /// Throws MapValidationError.
  TopologyMap(std::vector<Node> nodes, std::vector<Edge> edges, MapMeta meta = {});

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const MapMeta& meta() const { return meta_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  const std::vector<Adjacent>& neighbors(NodeId id) const;

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  /// Like find_edge but throws std::out_of_range for a missing link.
  EdgeId edge_between(NodeId u, NodeId v) const;

  double euclidean(NodeId u, NodeId v) const;
  std::vector<NodeId> ports() const;
  /// Sorted, unique zone ids present on edges.
  std::vector<ZoneId> zone_ids() const;

  bool operator==(const TopologyMap& other) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Adjacent>> adjacency_;
  MapMeta meta_;
};

/// Breadth-first reachability check over the adjacency lists.
bool is_connected(const TopologyMap& map);

/// Hop distances from `source` (unreachable nodes get SIZE_MAX).
std::vector<std::size_t> hop_distances(const TopologyMap& map, NodeId source);

/// Straight-line travel time of the link (u, v) at `nominal_speed` m/s.
/// Does not depend on anything that changes during operation.
double heuristic_cost(const TopologyMap& map, NodeId u, NodeId v, double nominal_speed);

// ---- generators

enum class MapFamily { winding_racks, random_racks, hub };

std::string_view to_string(MapFamily family);
MapFamily parse_map_family(std::string_view text);

struct GeneratorParams {
  /// Rack rows (winding_racks, random_racks) or ring levels (hub).
  int rows{5};
  /// Nodes per aisle (winding_racks, random_racks) or spokes (hub).
  int cols{8};
  double spacing{4.0};
  /// Fraction of grid links blocked by racks (random_racks).
  double rack_fraction{0.3};
  /// Maximum relative excess of link length over straight-line distance.
  double max_detour{0.25};
  /// Share of links that wind at all; the rest are straight.
  double detour_fraction{1.0};
  /// Cross aisles every this many columns (winding_racks), or rings every
  /// this many levels (hub).
  int cross_every{2};
  /// Zones are a zone_cols x zone_rows binning of edge midpoints.
  int zone_cols{3};
  int zone_rows{3};

  void validate(MapFamily family) const;
};

/// Default parameters used for a family's representative map.
GeneratorParams default_params(MapFamily family);

TopologyMap builtin_map(MapFamily family, const GeneratorParams& params, std::uint64_t seed);

/// Representative maps 1 (winding racks), 2 (random racks), 3 (hub) with
/// their default parameters.
TopologyMap representative_map(int index, std::uint64_t seed = 0);
std::uint64_t representative_map_seed(int index);

/// Rewrites zone ids by rectangular binning of edge midpoints over the
/// node bounding box.
std::vector<Edge> bin_zones(const std::vector<Node>& nodes, std::vector<Edge> edges,
                            int zone_cols, int zone_rows);

// ---- file format

TopologyMap parse_map(std::string_view text);
std::string serialize_map(const TopologyMap& map);
TopologyMap load_map(const std::filesystem::path& path);
void save_map(const TopologyMap& map, const std::filesystem::path& path);

}  // namespace ttroute
