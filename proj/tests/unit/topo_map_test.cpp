#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "ttroute/topo_map.hpp"

using namespace ttroute;

namespace {

TopologyMap triangle() {
  std::vector<Node> nodes{{0, 0, 0, NodeKind::port}, {1, 3, 0, NodeKind::bifurcation}, {2, 3, 4, NodeKind::port}};
  std::vector<Edge> edges{{0, 1, 3.0, 0}, {1, 2, 4.5, 1}, {0, 2, 5.0, 1}};
  return TopologyMap(nodes, edges, MapMeta{"tri", 7});
}

}  // namespace

TEST(TopologyMap, AdjacencyAndLookup) {
  const TopologyMap m = triangle();
  EXPECT_EQ(m.node_count(), 3u);
  EXPECT_EQ(m.edge_count(), 3u);
  EXPECT_EQ(m.neighbors(1).size(), 2u);
  EXPECT_EQ(*m.find_edge(2, 1), 1u);
  EXPECT_FALSE(m.find_edge(0, 0).has_value());
  EXPECT_THROW(m.edge_between(0, 0), std::out_of_range);
  EXPECT_DOUBLE_EQ(m.euclidean(0, 2), 5.0);
  EXPECT_EQ(m.ports(), (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(m.zone_ids(), (std::vector<ZoneId>{0, 1}));
}

TEST(TopologyMap, RejectsInvalidGraphs) {
  std::vector<Node> nodes{{0, 0, 0, NodeKind::port}, {1, 1, 0, NodeKind::port}, {2, 2, 0, NodeKind::port}};
  // disconnected
  EXPECT_THROW(TopologyMap(nodes, {{0, 1, 1.0, 0}}), MapValidationError);
  // duplicate link
  EXPECT_THROW(TopologyMap(nodes, {{0, 1, 1.0, 0}, {1, 0, 1.0, 0}, {1, 2, 1.0, 0}}), MapValidationError);
  // self loop
  EXPECT_THROW(TopologyMap(nodes, {{0, 1, 1.0, 0}, {1, 2, 1.0, 0}, {2, 2, 1.0, 0}}), MapValidationError);
  // non-positive length
  EXPECT_THROW(TopologyMap(nodes, {{0, 1, 0.0, 0}, {1, 2, 1.0, 0}}), MapValidationError);
  // unknown endpoint
  EXPECT_THROW(TopologyMap(nodes, {{0, 1, 1.0, 0}, {1, 5, 1.0, 0}}), MapValidationError);
  // ids not dense
  std::vector<Node> gappy{{0, 0, 0, NodeKind::port}, {2, 1, 0, NodeKind::port}};
  EXPECT_THROW(TopologyMap(gappy, {{0, 2, 1.0, 0}}), MapValidationError);
}

TEST(TopologyMap, HopDistances) {
  const TopologyMap m = triangle();
  EXPECT_EQ(hop_distances(m, 0), (std::vector<std::size_t>{0, 1, 1}));
  EXPECT_TRUE(is_connected(m));
}

TEST(TopologyMap, HeuristicCostIsStraightLineTime) {
  const TopologyMap m = triangle();
  EXPECT_DOUBLE_EQ(heuristic_cost(m, 0, 2, 2.0), 2.5);
  EXPECT_DOUBLE_EQ(heuristic_cost(m, 2, 0, 2.0), 2.5);
}

class Families : public ::testing::TestWithParam<MapFamily> {};

TEST_P(Families, GeneratedMapsAreConnectedDeterministicAndWind) {
  const MapFamily family = GetParam();
  const GeneratorParams p = default_params(family);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const TopologyMap a = builtin_map(family, p, seed);
    const TopologyMap b = builtin_map(family, p, seed);
    EXPECT_TRUE(a == b);
    EXPECT_TRUE(is_connected(a));
    for (EdgeId e = 0; e < a.edge_count(); ++e) {
      const Edge& edge = a.edge(e);
      // Links are never shorter than the straight line, and ring arcs and
      // detours are bounded.
      EXPECT_GE(edge.length, a.euclidean(edge.from, edge.to) - 1e-9);
      EXPECT_LE(edge.length, 2.0 * (1.0 + p.max_detour) * a.euclidean(edge.from, edge.to) + 1e-9);
    }
    const auto zones = a.zone_ids();
    EXPECT_GE(zones.size(), 2u);
    EXPECT_LE(zones.size(), static_cast<std::size_t>(p.zone_cols * p.zone_rows));
  }
  EXPECT_FALSE(builtin_map(family, p, 1) == builtin_map(family, p, 2));
}

INSTANTIATE_TEST_SUITE_P(All, Families,
                         ::testing::Values(MapFamily::winding_racks, MapFamily::random_racks, MapFamily::hub));

TEST(Generators, RandomRacksRemovesRequestedShare) {
  GeneratorParams p = default_params(MapFamily::random_racks);
  p.rack_fraction = 0.2;
  const TopologyMap m = builtin_map(MapFamily::random_racks, p, 5);
  const std::size_t grid_links = p.rows * (p.cols - 1) + (p.rows - 1) * p.cols;
  const auto target = static_cast<std::size_t>(std::floor(0.2 * grid_links));
  EXPECT_GE(m.edge_count(), grid_links - target);
  EXPECT_LT(m.edge_count(), grid_links);
}

TEST(Generators, StraightLinksWhenNothingWinds) {
  GeneratorParams p = default_params(MapFamily::winding_racks);
  p.detour_fraction = 0.0;
  const TopologyMap m = builtin_map(MapFamily::winding_racks, p, 3);
  for (const Edge& e : m.edges()) EXPECT_NEAR(e.length, m.euclidean(e.from, e.to), 1e-9);
}

TEST(Generators, ParameterValidation) {
  GeneratorParams p;
  p.spacing = 0.0;
  EXPECT_THROW(builtin_map(MapFamily::winding_racks, p, 1), std::invalid_argument);
  p = GeneratorParams{};
  p.cross_every = 0;
  EXPECT_THROW(builtin_map(MapFamily::winding_racks, p, 1), std::invalid_argument);
  p = GeneratorParams{};
  p.detour_fraction = 1.5;
  EXPECT_THROW(builtin_map(MapFamily::hub, p, 1), std::invalid_argument);
  p = GeneratorParams{};
  p.rack_fraction = 1.0;
  EXPECT_THROW(builtin_map(MapFamily::random_racks, p, 1), std::invalid_argument);
  p = GeneratorParams{};
  p.cols = 3;
  EXPECT_THROW(builtin_map(MapFamily::hub, p, 1), std::invalid_argument);
  EXPECT_THROW(parse_map_family("maze"), std::invalid_argument);
}

TEST(Generators, RepresentativeMaps) {
  std::set<std::string> names;
  for (int i = 1; i <= 3; ++i) {
    const TopologyMap m = representative_map(i);
    EXPECT_EQ(m.meta().seed, representative_map_seed(i));
    EXPECT_TRUE(m == representative_map(i));
    names.insert(m.meta().name);
  }
  EXPECT_EQ(names.size(), 3u);
  EXPECT_THROW(representative_map(4), std::invalid_argument);
}

TEST(Zones, BinningCoversTheBoundingBox) {
  const TopologyMap m = triangle();
  // Midpoints (1.5, 0), (3, 2), (1.5, 2) over a 3 x 4 box; ids run row-major.
  const auto edges = bin_zones(m.nodes(), m.edges(), 3, 2);
  EXPECT_EQ(edges[0].zone_id, 1);
  EXPECT_EQ(edges[1].zone_id, 5);
  EXPECT_EQ(edges[2].zone_id, 4);
  for (const Edge& e : bin_zones(m.nodes(), m.edges(), 1, 1)) EXPECT_EQ(e.zone_id, 0);
}

TEST(MapIo, RoundTripIsLossless) {
  for (int i = 1; i <= 3; ++i) {
    const TopologyMap m = representative_map(i);
    EXPECT_TRUE(parse_map(serialize_map(m)) == m);
  }
  const auto path = std::filesystem::temp_directory_path() / "ttroute-map-io-test.json";
  save_map(triangle(), path);
  EXPECT_TRUE(load_map(path) == triangle());
  std::filesystem::remove(path);
}

TEST(MapIo, Errors) {
  EXPECT_THROW(parse_map("{"), MapParseError);
  EXPECT_THROW(parse_map(R"({"nodes": []})"), MapParseError);
  EXPECT_THROW(parse_map(R"({"nodes": [{"id": 0, "x": 0, "y": 0, "kind": "door"}], "edges": []})"), MapParseError);
  EXPECT_THROW(parse_map(R"({"nodes": [{"id": 0, "x": 0, "y": 0, "kind": "port"},
                                       {"id": 1, "x": 1, "y": 0, "kind": "port"}], "edges": []})"),
               MapValidationError);
  EXPECT_THROW(load_map("/nonexistent/map.json"), MapParseError);
}
