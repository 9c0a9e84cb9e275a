#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ttroute/world_sim.hpp"

using namespace ttroute;

namespace {

TopologyMap line3() {
  std::vector<Node> nodes{{0, 0, 0, NodeKind::port}, {1, 10, 0, NodeKind::bifurcation}, {2, 20, 0, NodeKind::port}};
  return TopologyMap(nodes, {{0, 1, 10.0, 0}, {1, 2, 12.0, 1}});
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / (v.size() - 1);
}

}  // namespace

TEST(Battery, FactorIsOneWhenFullAndGrowsAsItEmpties) {
  const BatteryModel b;
  EXPECT_DOUBLE_EQ(b.factor(1.0), 1.0);
  EXPECT_GT(b.factor(0.0), b.factor(0.5));
  EXPECT_NEAR(BatteryModel{.hump_enabled = false}.factor(0.0), 1.5, 1e-12);
  for (double s = 0.0; s <= 1.0; s += 0.01) EXPECT_GE(b.factor(s), 1.0);
}

TEST(Battery, DrainNeverIncreasesAndClamps) {
  BatteryState s{1.0, 0.01};
  s.drain(30.0);
  EXPECT_NEAR(s.soc, 0.7, 1e-12);
  s.drain(-5.0);
  EXPECT_NEAR(s.soc, 0.7, 1e-12);
  s.drain(1000.0);
  EXPECT_EQ(s.soc, 0.0);
  EXPECT_TRUE(s.depleted());
}

TEST(Roughness, MultipliersAreOrdered) {
  const RoughnessMultipliers r;
  EXPECT_LT(r.of(FloorLevel::smooth), r.of(FloorLevel::light));
  EXPECT_LT(r.of(FloorLevel::light), r.of(FloorLevel::moderate));
  EXPECT_LT(r.of(FloorLevel::moderate), r.of(FloorLevel::heavy));
  EXPECT_EQ(parse_floor_level("moderate"), FloorLevel::moderate);
  EXPECT_THROW(parse_floor_level("icy"), std::invalid_argument);
}

TEST(World, TravelTimeIsMonotoneInRoughnessAndAtLeastBase) {
  const TopologyMap m = line3();
  World w(m, WorldParams{}, FloorCondition::uniform(m), 1);
  double previous = 0.0;
  for (FloorLevel level : {FloorLevel::smooth, FloorLevel::light, FloorLevel::moderate, FloorLevel::heavy}) {
    w.set_zone_level(1, level);
    const double t = w.true_travel_time(m, 1);
    EXPECT_GE(t, w.base_time(m, 1));
    EXPECT_GT(t, previous);
    previous = t;
  }
}

TEST(World, ExecutionDrainsLogsAndCounts) {
  const TopologyMap m = line3();
  WorldParams p;
  p.discharge_per_second = 0.001;
  World w(m, p, FloorCondition::uniform(m), 4);
  const std::vector<NodeId> path{0, 1, 2};
  const ExecutionResult r = w.execute_edges(m, path);
  ASSERT_EQ(r.traversals.size(), 2u);
  EXPECT_FALSE(r.depleted);
  EXPECT_EQ(w.traversal_count(), 2u);
  EXPECT_NEAR(w.battery().soc, 1.0 - 0.001 * r.total_true_seconds(), 1e-12);
  EXPECT_EQ(w.log().samples(0).size(), 1u);
  EXPECT_EQ(w.log().samples(1).front().k, 2u);
  // Multiplicative observation noise of 2% by default.
  EXPECT_NE(r.traversals[0].observed_seconds, r.traversals[0].true_seconds);
  EXPECT_NEAR(r.traversals[0].observed_seconds / r.traversals[0].true_seconds, 1.0, 0.2);
  EXPECT_THROW(w.execute_edges(m, std::vector<NodeId>{0, 2}), std::invalid_argument);
}

TEST(World, StopsWhenTheBatteryEmpties) {
  const TopologyMap m = line3();
  WorldParams p;
  p.discharge_per_second = 0.2;  // empty after the first edge
  World w(m, p, FloorCondition::uniform(m), 4);
  const ExecutionResult r = w.execute_edges(m, std::vector<NodeId>{0, 1, 2});
  EXPECT_TRUE(r.depleted);
  EXPECT_EQ(r.traversals.size(), 1u);
  w.replace_battery();
  EXPECT_EQ(w.battery().soc, 1.0);
  EXPECT_EQ(w.traversal_count(), 1u);
}

TEST(World, CopiesReplayIdentically) {
  const TopologyMap m = line3();
  World a(m, WorldParams{}, FloorCondition::uniform(m), 8);
  a.execute_edges(m, std::vector<NodeId>{0, 1, 2});
  World b = a;
  const auto ra = a.execute_edges(m, std::vector<NodeId>{2, 1, 0});
  const auto rb = b.execute_edges(m, std::vector<NodeId>{2, 1, 0});
  for (std::size_t i = 0; i < ra.traversals.size(); ++i) {
    EXPECT_EQ(ra.traversals[i].observed_seconds, rb.traversals[i].observed_seconds);
  }
}

TEST(World, RejectsFloorsThatMissZones) {
  const TopologyMap m = line3();
  FloorCondition partial;
  partial.set(0, FloorLevel::smooth);
  EXPECT_THROW(World(m, WorldParams{}, partial, 1), std::invalid_argument);
}

TEST(Snr, InfiniteIsExact) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(observe_with_snr(3.25, std::numeric_limits<double>::infinity(), rng), 3.25);
}

TEST(Snr, NoiseVarianceRatioFollowsDecibels) {
  std::mt19937_64 rng(2);
  std::vector<double> lo, hi;
  for (int i = 0; i < 10000; ++i) {
    lo.push_back(observe_with_snr(5.0, 10.0, rng, 5.0));
    hi.push_back(observe_with_snr(5.0, 50.0, rng, 5.0));
  }
  // 40 dB apart: variance ratio 10^4.
  const double ratio = sample_variance(lo) / sample_variance(hi);
  EXPECT_NEAR(ratio, 1e4, 0.2e4);
  // sigma at 10 dB is 5 * 10^-0.5
  EXPECT_NEAR(std::sqrt(sample_variance(lo)), 5.0 * std::pow(10.0, -0.5), 0.05);
}

TEST(Snr, OutputStaysPositive) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) EXPECT_GT(observe_with_snr(2.0, 10.0, rng, 20.0), 0.0);
}

TEST(Snr, WorldObservationsFollowConfiguredLevel) {
  const TopologyMap m = line3();
  WorldParams p;
  p.discharge_per_second = 1e-9;
  p.snr_db = std::numeric_limits<double>::infinity();
  World w(m, p, FloorCondition::uniform(m), 5);
  const auto r = w.execute_edges(m, std::vector<NodeId>{0, 1});
  EXPECT_EQ(r.traversals[0].observed_seconds, r.traversals[0].true_seconds);
}

TEST(ObservationLogTest, IndexingAndMeans) {
  ObservationLog log(2);
  log.append(0, 1, 2.0);
  log.append(0, 3, 4.0);
  EXPECT_THROW(log.append(0, 3, 1.0), std::invalid_argument);
  EXPECT_THROW(log.append(1, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(log.append(5, 1, 1.0), std::out_of_range);
  EXPECT_EQ(*log.latest(0), 4.0);
  EXPECT_EQ(*log.mean(0), 3.0);
  EXPECT_EQ(*log.at_index(0, 2), 4.0);
  EXPECT_FALSE(log.at_index(0, 0).has_value());
  EXPECT_FALSE(log.mean(1).has_value());
  EXPECT_EQ(log.total_samples(), 2u);
}

TEST(ObservationTable, OneStreamPerEdge) {
  const TopologyMap m = line3();
  const World w(m, WorldParams{}, FloorCondition::uniform(m), 6);
  const ObservationLog table = generate_observation_table(m, w, 5);
  EXPECT_EQ(table.samples(0).size(), 5u);
  EXPECT_EQ(table.samples(1).size(), 5u);
  EXPECT_THROW(generate_observation_table(m, w, 0), std::invalid_argument);
}
