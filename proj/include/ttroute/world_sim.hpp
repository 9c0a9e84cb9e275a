#pragma once
/**
 * Simulated ground truth for edge travel times.
 *
 * The realised travel time of an edge is
 *
 *   length / nominal_speed * battery_factor(soc) * roughness(zone level)
 *
 * The observation the robot reports carries noise: multiplicative (1 + eps)
 * by default, or additive Gaussian noise at a configured SNR.
 *
 * A World is single-owner mutable state. Copying a World yields an
 * independent clone with identical future random streams.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttroute/path_result.hpp"
#include "ttroute/topo_map.hpp"

namespace ttroute {

enum class FloorLevel : std::uint8_t { smooth = 0, light = 1, moderate = 2, heavy = 3 };

std::string_view to_string(FloorLevel level);
FloorLevel parse_floor_level(std::string_view text);

/// Travel-time multiplier as a function of battery state of charge:
/// 1 + beta (1 - soc)^exponent plus an optional early-life bump centred at
/// hump_center. The bump is offset so that factor(1) == 1 exactly.
struct BatteryModel {
  double beta{0.5};
  double exponent{3.0};
  bool hump_enabled{true};
  double hump_height{0.08};
  double hump_center{0.9};
  double hump_width{0.05};

  double factor(double soc) const;
};

struct RoughnessMultipliers {
  double smooth{1.0};
  double light{1.15};
  double moderate{1.35};
  double heavy{1.6};

  double of(FloorLevel level) const;
};

struct WorldParams {
  double nominal_speed{1.0};
  double discharge_per_second{1.0e-4};
  /// Coefficient of variation of the multiplicative observation noise; used
  /// when snr_db is not set.
  double noise_cv{0.02};
  /// Observation SNR in dB; +inf means noise free. Unset selects the
  /// multiplicative noise above.
  std::optional<double> snr_db;
  BatteryModel battery;
  RoughnessMultipliers roughness;

  void validate() const;
};

struct BatteryState {
  double soc{1.0};
  double discharge_per_second{1.0e-4};

  /// Soc never increases and stays in [0, 1].
  void drain(double seconds);
  bool depleted() const { return soc <= 0.0; }
};

class FloorCondition {
 public:
  FloorCondition() = default;
  /// Every zone of `map` set to `level`.
  static FloorCondition uniform(const TopologyMap& map, FloorLevel level = FloorLevel::smooth);

  FloorLevel level(ZoneId zone) const;
  void set(ZoneId zone, FloorLevel level);
  bool covers(const TopologyMap& map) const;
  const std::map<ZoneId, FloorLevel>& levels() const { return zone_levels_; }

 private:
  std::map<ZoneId, FloorLevel> zone_levels_;
};

struct ObservationSample {
  std::uint64_t k{0};
  double seconds{0.0};
};

/// Per-edge observation streams, keyed by traversal index k.
class ObservationLog {
 public:
  ObservationLog() = default;
  explicit ObservationLog(std::size_t edge_count);

  /// k must exceed the last k recorded for the edge; seconds must be > 0.
  void append(EdgeId edge, std::uint64_t k, double seconds);

  std::size_t edge_count() const { return samples_.size(); }
  std::span<const ObservationSample> samples(EdgeId edge) const;
  std::optional<double> latest(EdgeId edge) const;
  std::optional<double> mean(EdgeId edge) const;
  /// Observation with 1-based index k in the edge's stream.
  std::optional<double> at_index(EdgeId edge, std::size_t k) const;
  std::size_t total_samples() const;

  /// CSV with columns edge_from,edge_to,k,observed_tt_seconds.
  std::string to_csv(const TopologyMap& map) const;

 private:
  struct Stream {
    std::vector<ObservationSample> samples;
    double sum{0.0};
  };
  std::vector<Stream> samples_;
};

struct TraversalRecord {
  EdgeId edge{0};
  NodeId from{0};
  NodeId to{0};
  std::uint64_t k{0};
  double true_seconds{0.0};
  double observed_seconds{0.0};
};

struct ExecutionResult {
  std::vector<TraversalRecord> traversals;
  bool depleted{false};

  double total_true_seconds() const;
};

/// Adds Gaussian noise with sigma = signal_rms * 10^(-snr_db/20). An
/// infinite SNR returns the input unchanged. The result is kept positive.
double observe_with_snr(double true_value, double snr_db, std::mt19937_64& rng, double signal_rms);
inline double observe_with_snr(double true_value, double snr_db, std::mt19937_64& rng) {
  return observe_with_snr(true_value, snr_db, rng, true_value);
}

class World {
 public:
  World(const TopologyMap& map, WorldParams params, FloorCondition floor, std::uint64_t seed);

  const WorldParams& params() const { return params_; }
  const BatteryState& battery() const { return battery_; }
  const FloorCondition& floor() const { return floor_; }
  std::uint64_t traversal_count() const { return traversal_count_; }
  std::uint64_t seed() const { return seed_; }
  const ObservationLog& log() const { return log_; }

  double base_time(const TopologyMap& map, EdgeId edge) const;
  /// Base time scaled by the battery and roughness factors.
  double expected_travel_time(const TopologyMap& map, EdgeId edge) const;
  /// Realised travel time of the next traversal of `edge`. Noise only
  /// enters the observation, so this equals expected_travel_time.
  double true_travel_time(const TopologyMap& map, EdgeId edge) const;

  /// Traverses the path's edges in order, draining the battery and
  /// appending observations. Stops early with `depleted` set once the
  /// battery is empty and edges remain.
  ExecutionResult execute_path(const TopologyMap& map, const PathResult& path);
  ExecutionResult execute_edges(const TopologyMap& map, std::span<const NodeId> nodes);

  void set_zone_level(ZoneId zone, FloorLevel level) { floor_.set(zone, level); }
  void set_snr(std::optional<double> snr_db) { params_.snr_db = snr_db; }
  /// Fresh battery; traversal count and log are kept.
  void replace_battery();

 private:
  TraversalRecord traverse(const TopologyMap& map, NodeId from, NodeId to);

  WorldParams params_;
  BatteryState battery_;
  FloorCondition floor_;
  std::uint64_t seed_;
  std::uint64_t traversal_count_{0};
  ObservationLog log_;
  std::uint64_t observation_seed_;
  std::vector<double> signal_power_sum_;
  std::vector<std::uint64_t> signal_count_;
};

/// Legacy observation table: for every edge, a fresh battery and repeated
/// traversals of that edge, recording observations k = 1..repeats or until
/// the battery is exhausted.
ObservationLog generate_observation_table(const TopologyMap& map, const World& world_template,
                                          std::size_t repeats);

}  // namespace ttroute
