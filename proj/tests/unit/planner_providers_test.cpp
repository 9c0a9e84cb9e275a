#include <gtest/gtest.h>

#include <random>

#include "graphs.hpp"
#include "ttroute/cost_provider.hpp"
#include "ttroute/planner.hpp"
#include "ttroute/seeding.hpp"

using namespace ttroute;

namespace {

// 0 - 1 - 3
//  \     /
//   - 2 -
TopologyMap diamond() {
  std::vector<Node> nodes{{0, 0, 0, NodeKind::port},
                          {1, 3, 1, NodeKind::bifurcation},
                          {2, 3, -1, NodeKind::bifurcation},
                          {3, 6, 0, NodeKind::port}};
  return TopologyMap(nodes, {{0, 1, 4.0, 0}, {1, 3, 4.0, 0}, {0, 2, 4.0, 1}, {2, 3, 4.0, 1}});
}

// Records every query the planner makes.
class RecordingProvider final : public CostProvider {
 public:
  explicit RecordingProvider(std::vector<double> costs) : costs_(std::move(costs)) {}
  ProviderKind kind() const override { return ProviderKind::frozen; }
  double estimate(const EdgeQuery& q) override {
    queries.push_back({q.from, q.to, q.k, q.prev_cost,
                       std::vector<double>(q.prefix_costs.begin(), q.prefix_costs.end())});
    return costs_[q.edge];
  }
  struct Seen {
    NodeId from, to;
    int k;
    double prev;
    std::vector<double> prefix;
  };
  std::vector<Seen> queries;

 private:
  std::vector<double> costs_;
};

}  // namespace

TEST(Planner, MatchesAllPairsOracleOnRandomGraphs) {
  for (std::uint64_t g = 0; g < 300; ++g) {
    const oracle::RandomGraph rg = oracle::random_connected_graph(derive_seed(g, "unit-graph"));
    const auto dist = oracle::all_pairs(rg.map, rg.costs);
    for (NodeId s = 0; s < rg.map.node_count(); ++s) {
      for (NodeId d = 0; d < rg.map.node_count(); ++d) {
        if (s == d) continue;
        FrozenCostProvider provider(rg.costs);
        const PathResult p = plan(rg.map, provider, s, d);
        ASSERT_EQ(p.total_est_cost, dist[s][d]) << "graph " << g << " " << s << "->" << d;
        ASSERT_EQ(p.nodes.front(), s);
        ASSERT_EQ(p.nodes.back(), d);
        ASSERT_EQ(p.edges.size() + 1, p.nodes.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
          ASSERT_EQ(rg.map.edge_between(p.nodes[i], p.nodes[i + 1]), p.edges[i]);
          sum += rg.costs[p.edges[i]];
        }
        ASSERT_EQ(sum, p.total_est_cost);
      }
    }
  }
}

TEST(Planner, BruteForceAgreesWithOracle) {
  for (std::uint64_t g = 0; g < 100; ++g) {
    const oracle::RandomGraph rg = oracle::random_connected_graph(derive_seed(g, "unit-brute"));
    const auto dist = oracle::all_pairs(rg.map, rg.costs);
    const NodeId d = rg.map.node_count() - 1;
    EXPECT_EQ(brute_force_shortest(rg.map, rg.costs, 0, d).total, dist[0][d]);
  }
}

TEST(Planner, TiesGoToSmallerNodeIds) {
  const TopologyMap m = diamond();
  FrozenCostProvider provider({1.0, 1.0, 1.0, 1.0});
  const PathResult p = plan(m, provider, 0, 3);
  EXPECT_EQ(p.nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(brute_force_shortest(m, provider.costs(), 0, 3).nodes, (std::vector<NodeId>{0, 1, 3}));
}

TEST(Planner, QueriesCarryDepthAndPrefix) {
  const TopologyMap m = diamond();
  RecordingProvider provider({1.0, 2.0, 5.0, 5.0});
  PlannerLabels labels;
  const PathResult p = plan(m, provider, 0, 3, labels);
  EXPECT_EQ(p.nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(p.depths, (std::vector<int>{1, 2}));
  EXPECT_EQ(p.est_costs, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(labels.d[3], 3.0);
  EXPECT_EQ(labels.pi[0], 0u);
  bool saw_depth_two = false;
  for (const auto& q : provider.queries) {
    if (q.from == 0) {
      EXPECT_EQ(q.k, 1);
      EXPECT_EQ(q.prev, 0.0);
      EXPECT_EQ(q.prefix, (std::vector<double>{0.0}));
    }
    if (q.from == 1 && q.to == 3) {
      saw_depth_two = true;
      EXPECT_EQ(q.k, 2);
      EXPECT_EQ(q.prev, 1.0);
      EXPECT_EQ(q.prefix, (std::vector<double>{0.0, 1.0}));
    }
  }
  EXPECT_TRUE(saw_depth_two);
  // each directed link priced at most once
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& q : provider.queries) EXPECT_TRUE(seen.insert({q.from, q.to}).second);
}

TEST(Planner, SourceEqualsDestination) {
  const TopologyMap m = diamond();
  FrozenCostProvider provider({1.0, 1.0, 1.0, 1.0});
  const PathResult p = plan(m, provider, 2, 2);
  EXPECT_TRUE(p.empty());
  EXPECT_EQ(p.nodes, (std::vector<NodeId>{2}));
  EXPECT_EQ(p.total_est_cost, 0.0);
}

TEST(Planner, RejectsUnknownNodesAndBadCosts) {
  const TopologyMap m = diamond();
  FrozenCostProvider provider({1.0, 1.0, 1.0, 1.0});
  EXPECT_THROW(plan(m, provider, 0, 9), std::out_of_range);
  EXPECT_THROW(FrozenCostProvider({1.0, -1.0, 1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(FrozenCostProvider({1.0, 0.0}), std::invalid_argument);
}

TEST(Providers, KindNames) {
  EXPECT_EQ(parse_provider_kind("static"), ProviderKind::static_kf);
  EXPECT_EQ(parse_provider_kind("dynamic_kf"), ProviderKind::dynamic_kf);
  EXPECT_EQ(to_string(ProviderKind::heuristic), "heuristic");
  EXPECT_THROW(parse_provider_kind("oracle"), std::invalid_argument);
}

TEST(Providers, HeuristicIgnoresHistory) {
  const TopologyMap m = diamond();
  HeuristicProvider h(m, 2.0);
  const std::vector<double> prefix{0.0, 9.0, 9.0};
  const double a = estimate_edge_cost(h, m, {0, 1, 0, 1, 0.0, {}, std::nullopt});
  const double b = estimate_edge_cost(h, m, {0, 1, 0, 3, 9.0, prefix, 100.0});
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a, m.euclidean(0, 1) / 2.0);
  EXPECT_THROW(estimate_edge_cost(h, m, {0, 3, 0, 1, 0.0, {}, std::nullopt}), std::out_of_range);
  EXPECT_THROW(estimate_edge_cost(h, m, {0, 1, 0, 0, 0.0, {}, std::nullopt}), std::invalid_argument);
}

TEST(Providers, StaticFiltersTheLegacyTable) {
  const TopologyMap m = diamond();
  ObservationLog table(m.edge_count());
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    for (std::uint64_t k = 1; k <= 3; ++k) table.append(e, k, 5.0 + k);
  }
  StaticKfConfig cfg{1.0, 0.5, 1.0};
  StaticKfProvider p(m, table, 1.0, cfg);
  // Starts at the legacy mean, 7, then filters y = 6 (k = 1).
  ScalarKfState expected = scalar_kf_init(7.0, 1.0, 0.5, 1.0);
  expected = scalar_kf_step(expected, 6.0).state;
  std::vector<FilterTraceRow> trace;
  p.set_trace_sink(&trace);
  EXPECT_DOUBLE_EQ(p.estimate({0, 1, 0, 1, 0.0, {}, std::nullopt}), expected.x_hat);
  EXPECT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].observation, 6.0);
  EXPECT_THROW(p.estimate({0, 1, 0, 4, 0.0, {}, std::nullopt}), ObservationExhausted);
  EXPECT_NE(filter_trace_csv(trace).find("edge_from,edge_to,k,prior,gain_or_norm,posterior,observation"),
            std::string::npos);
}

TEST(Providers, DynamicFallsBackToRunningMean) {
  const TopologyMap m = diamond();
  World world(m, WorldParams{}, FloorCondition::uniform(m), 3);
  DynamicKfConfig cfg;
  cfg.regression_no = 3;
  DynamicKfProvider p(m, world.log(), 1.0, cfg, 9);
  // Nothing observed: heuristic cost.
  EXPECT_DOUBLE_EQ(p.estimate({0, 1, 0, 1, 0.0, std::vector<double>{0.0}, std::nullopt}), m.euclidean(0, 1));
  world.execute_edges(m, std::vector<NodeId>{0, 1});
  EXPECT_DOUBLE_EQ(p.running_mean(0), *world.log().mean(0));
  EXPECT_DOUBLE_EQ(p.estimate({0, 1, 0, 2, 0.0, std::vector<double>{0.0, 1.0}, std::nullopt}), p.running_mean(0));
  EXPECT_EQ(p.diagnostics().fallbacks, 2u);
}

TEST(Providers, DynamicEstimatesArePositiveAndSeeded) {
  const TopologyMap m = diamond();
  World world(m, WorldParams{}, FloorCondition::uniform(m), 3);
  for (int i = 0; i < 5; ++i) world.execute_edges(m, std::vector<NodeId>{0, 1, 3, 2, 0});
  DynamicKfConfig cfg;
  DynamicKfProvider a(m, world.log(), 1.0, cfg, 9);
  DynamicKfProvider b(m, world.log(), 1.0, cfg, 9);
  const std::vector<double> prefix{0.0, 4.1, 4.3};
  for (int k = 3; k < 20; ++k) {
    const EdgeQuery q{1, 3, 1, k, 4.3, prefix, std::nullopt};
    const double ea = a.estimate(q);
    EXPECT_GT(ea, 0.0);
    EXPECT_EQ(ea, b.estimate(q));
  }
  EXPECT_EQ(a.coefficients().r, 2);
}
