#pragma once
/**
 * Repetition experiments: a robot repeatedly plans and executes routes
 * from a fixed schedule of (source, destination) pairs in a world whose
 * battery drains and whose floor zones change on a scripted timetable.
 *
 * Each (provider, seed) cell owns its own world clone, provider and log;
 * cells with the same seed see identically seeded worlds. Averages are
 * taken over both the schedule's pairs and its repetitions.
 */

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttroute/cost_provider.hpp"
#include "ttroute/path_result.hpp"
#include "ttroute/topo_map.hpp"
#include "ttroute/world_sim.hpp"

namespace ttroute {

// ---- scenarios

using OdPair = std::pair<NodeId, NodeId>;

enum class ScenarioKind { none, battery, floor, battery_floor };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view text);

struct FloorEvent {
  int call_index{0};  // applied before planning call `call_index` (0-based)
  ZoneId zone{0};
  FloorLevel level{FloorLevel::smooth};
};

struct Scenario {
  ScenarioKind kind{ScenarioKind::battery_floor};
  FloorCondition initial;
  std::vector<FloorEvent> events;
  /// Battery state of charge affects travel time.
  bool battery_degradation{true};

  /// World parameters with battery effects switched off when needed.
  WorldParams apply(WorldParams params) const;
};

/// none: smooth floor, no battery effect. battery: smooth floor, draining
/// battery. floor: scripted zone changes only. battery_floor: both.
Scenario make_scenario(ScenarioKind kind, const TopologyMap& map);

/// Zone whose edge midpoints lie closest to the map centre, and so on.
std::vector<ZoneId> zones_by_centrality(const TopologyMap& map);

/// Zones ordered by how many edges of the straight-line shortest routes
/// between `od_list` pairs they hold, busiest first (ties by zone id). The
/// scripted scenarios degrade the busiest zones of the default schedule,
/// as the floor wears where robots drive most.
std::vector<ZoneId> zones_by_traffic(const TopologyMap& map, std::span<const OdPair> od_list, double nominal_speed);


/// `count` distinct port pairs at least `min_hops` apart, sampled with
/// `seed`. Falls back to all nodes when there are too few ports.
std::vector<OdPair> default_od_list(const TopologyMap& map, std::uint64_t seed, std::size_t count = 10,
                                    std::size_t min_hops = 8);

// ---- configuration

struct ExperimentConfig {
  /// "1", "2", "3" for the representative maps, otherwise a map file path.
  std::string map{"1"};
  std::vector<ProviderKind> providers{ProviderKind::heuristic, ProviderKind::static_kf, ProviderKind::dynamic_kf};
  int repetitions{80};
  int regression_no{2};
  std::optional<double> snr_db;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  /// Empty selects default_od_list(map, map seed).
  std::vector<OdPair> od_list;
  ScenarioKind scenario{ScenarioKind::battery_floor};
  WorldParams world;
  StaticKfConfig static_kf;
  DynamicKfConfig dynamic_kf;
  std::size_t legacy_repeats{200};
  /// Worker threads for independent cells; 0 uses the hardware count.
  unsigned threads{0};

  /// Structural checks needed to run at all.
  void validate_runnable() const;
  /// Additionally restricts repetitions to {20,40,60,80}, regression_no to
  /// [2,9] and snr_db to {10,25,50,inf}.
  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string serialize_experiment_config(const ExperimentConfig& config);

TopologyMap resolve_map(const std::string& selector);

// ---- results

struct CallRecord {
  int call_index{0};
  NodeId source{0};
  NodeId dest{0};
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  double total_est_cost{0.0};
  double total_true_cost{0.0};
  bool depleted{false};
};

struct CellSummary {
  std::string map;
  ProviderKind provider{ProviderKind::heuristic};
  int repetitions{0};
  int regression_no{0};
  std::optional<double> snr_db;
  std::uint64_t seed{0};
  double mean_est_cost{0.0};
  double mean_true_cost{0.0};
  /// (heuristic - this) / heuristic on mean executed true cost, percent.
  double saving_pct_vs_heuristic{0.0};
  ProviderDiagnostics diagnostics;
  int depletion_events{0};
  std::vector<CallRecord> records;
};

struct ExperimentSummary {
  std::vector<CellSummary> cells;

  const CellSummary& cell(ProviderKind provider, std::uint64_t seed) const;
  std::vector<const CellSummary*> cells_for(ProviderKind provider) const;
  /// Averages of the per-seed means.
  double mean_est_cost(ProviderKind provider) const;
  double mean_true_cost(ProviderKind provider) const;
  double mean_saving_pct(ProviderKind provider) const;
};

/// Optional by-products of a cell: the world's observation log and the
/// provider's filter trace.
struct CellArtifacts {
  ObservationLog observations;
  std::vector<FilterTraceRow> trace;
};

/// One cell: plan and execute `config.repetitions` calls with one provider.
CellSummary run_cell(const TopologyMap& map, const ExperimentConfig& config, ProviderKind provider,
                     std::uint64_t seed, CellArtifacts* artifacts = nullptr);

ExperimentSummary run_repetitions(const ExperimentConfig& config);
ExperimentSummary run_repetitions(const TopologyMap& map, const ExperimentConfig& config);

std::vector<ExperimentSummary> sweep_regression(const ExperimentConfig& base, std::span<const int> r_values);
std::vector<ExperimentSummary> sweep_snr(const ExperimentConfig& base, std::span<const double> snr_values);

// ---- three-way path comparison

struct ComparisonReport {
  static constexpr std::array<ProviderKind, 3> kProviders{ProviderKind::heuristic, ProviderKind::static_kf,
                                                          ProviderKind::dynamic_kf};
  OdPair od;
  std::array<PathResult, 3> paths;
  /// Executed true cost of each path from a common world snapshot.
  std::array<double, 3> true_costs{};
  std::array<double, 3> saving_pct{};  // vs heuristic
  std::vector<EdgeId> shared_edges;    // on all three paths
  std::array<std::vector<EdgeId>, 3> distinct_edges;  // on this path only
};

struct CompareOptions {
  ScenarioKind scenario{ScenarioKind::battery};
  /// Planning calls made before the compared call.
  int warmup_calls{40};
  std::uint64_t seed{1};
  std::optional<OdPair> od;
  /// Replaces the scenario built from `scenario`.
  std::optional<Scenario> custom;
};

/// Runs the same warm-up schedule with each provider in identically seeded
/// worlds, then plans `od` with each and executes all three paths from the
/// heuristic run's world snapshot.
ComparisonReport compare_paths(const TopologyMap& map, const ExperimentConfig& config, const CompareOptions& options);

/// total + rough_edge_count * delta. Throws std::invalid_argument when the
/// count exceeds the path's edges or delta is negative.
double real_cost_delta(const PathResult& path, int rough_edge_count, double delta);
double real_cost_delta(double total_cost, int rough_edge_count, double delta);

/// Number of path edges lying in a zone that is not smooth.
int count_rough_edges(const TopologyMap& map, const PathResult& path, const FloorCondition& floor);

// ---- CSV

/// map,provider,repetitions,r,snr_db,seed,mean_est_cost,mean_true_cost,saving_pct_vs_heuristic
std::string summary_csv(std::span<const ExperimentSummary> summaries);
/// One row per planning call.
std::string records_csv(std::span<const ExperimentSummary> summaries);
/// call_index,source,dest,node_sequence,total_est_cost,total_true_cost
std::string paths_csv(std::span<const CallRecord> records);
std::string comparison_csv(const TopologyMap& map, const ComparisonReport& report);

std::string format_snr(const std::optional<double>& snr_db);
std::string format_node_sequence(std::span<const NodeId> nodes);

}  // namespace ttroute
