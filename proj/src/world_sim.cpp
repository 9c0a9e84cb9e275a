#include "ttroute/world_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ttroute/seeding.hpp"

namespace ttroute {

std::string_view to_string(FloorLevel level) {
  switch (level) {
    case FloorLevel::smooth:
      return "smooth";
    case FloorLevel::light:
      return "light";
    case FloorLevel::moderate:
      return "moderate";
    case FloorLevel::heavy:
      return "heavy";
  }
  return "unknown";
}

FloorLevel parse_floor_level(std::string_view text) {
  if (text == "smooth") return FloorLevel::smooth;
  if (text == "light") return FloorLevel::light;
  if (text == "moderate") return FloorLevel::moderate;
  if (text == "heavy") return FloorLevel::heavy;
  throw std::invalid_argument("unknown floor level '" + std::string(text) + "'");
}

double BatteryModel::factor(double soc) const {
  soc = std::clamp(soc, 0.0, 1.0);
  double f = 1.0 + beta * std::pow(1.0 - soc, exponent);
  if (hump_enabled && hump_height != 0.0) {
    const auto bump = [&](double s) {
      const double z = (s - hump_center) / hump_width;
      return std::exp(-z * z);
    };
    f += hump_height * (bump(soc) - bump(1.0));
  }
  return f;
}

double RoughnessMultipliers::of(FloorLevel level) const {
  switch (level) {
    case FloorLevel::smooth:
      return smooth;
    case FloorLevel::light:
      return light;
    case FloorLevel::moderate:
      return moderate;
    case FloorLevel::heavy:
      return heavy;
  }
  return smooth;
}

void WorldParams::validate() const {
  if (!(nominal_speed > 0.0)) throw std::invalid_argument("nominal_speed must be positive");
  if (!(discharge_per_second > 0.0)) throw std::invalid_argument("discharge_per_second must be positive");
  if (!(noise_cv >= 0.0) || noise_cv > 0.5) throw std::invalid_argument("noise_cv must be in [0, 0.5]");
  if (snr_db && std::isnan(*snr_db)) throw std::invalid_argument("snr_db must not be NaN");
  if (!(battery.hump_width > 0.0)) throw std::invalid_argument("battery hump width must be positive");
  const double levels[] = {roughness.smooth, roughness.light, roughness.moderate, roughness.heavy};
  for (double m : levels) {
    if (!(m > 0.0)) throw std::invalid_argument("roughness multipliers must be positive");
  }
}

void BatteryState::drain(double seconds) {
  if (seconds <= 0.0) return;
  soc = std::clamp(soc - discharge_per_second * seconds, 0.0, soc);
}

FloorCondition FloorCondition::uniform(const TopologyMap& map, FloorLevel level) {
  FloorCondition floor;
  for (ZoneId z : map.zone_ids()) floor.set(z, level);
  return floor;
}

FloorLevel FloorCondition::level(ZoneId zone) const {
  const auto it = zone_levels_.find(zone);
  if (it == zone_levels_.end()) throw std::out_of_range("no floor level for zone " + std::to_string(zone));
  return it->second;
}

void FloorCondition::set(ZoneId zone, FloorLevel level) { zone_levels_[zone] = level; }

bool FloorCondition::covers(const TopologyMap& map) const {
  const auto zones = map.zone_ids();
  return std::all_of(zones.begin(), zones.end(), [&](ZoneId z) { return zone_levels_.contains(z); });
}

// ---- ObservationLog

ObservationLog::ObservationLog(std::size_t edge_count) : samples_(edge_count) {}

void ObservationLog::append(EdgeId edge, std::uint64_t k, double seconds) {
  if (edge >= samples_.size()) throw std::out_of_range("observation for unknown edge " + std::to_string(edge));
  if (!(seconds > 0.0) || !std::isfinite(seconds)) throw std::invalid_argument("travel times must be positive");
  Stream& s = samples_[edge];
  if (!s.samples.empty() && k <= s.samples.back().k) {
    throw std::invalid_argument("observation indices must increase per edge");
  }
  s.samples.push_back({k, seconds});
  s.sum += seconds;
}

std::span<const ObservationSample> ObservationLog::samples(EdgeId edge) const {
  if (edge >= samples_.size()) return {};
  return samples_[edge].samples;
}

std::optional<double> ObservationLog::latest(EdgeId edge) const {
  if (edge >= samples_.size() || samples_[edge].samples.empty()) return std::nullopt;
  return samples_[edge].samples.back().seconds;
}

std::optional<double> ObservationLog::mean(EdgeId edge) const {
  if (edge >= samples_.size() || samples_[edge].samples.empty()) return std::nullopt;
  return samples_[edge].sum / static_cast<double>(samples_[edge].samples.size());
}

std::optional<double> ObservationLog::at_index(EdgeId edge, std::size_t k) const {
  if (edge >= samples_.size() || k == 0 || k > samples_[edge].samples.size()) return std::nullopt;
  return samples_[edge].samples[k - 1].seconds;
}

std::size_t ObservationLog::total_samples() const {
  std::size_t n = 0;
  for (const Stream& s : samples_) n += s.samples.size();
  return n;
}

std::string ObservationLog::to_csv(const TopologyMap& map) const {
  std::string out = "edge_from,edge_to,k,observed_tt_seconds\n";
  for (EdgeId e = 0; e < samples_.size(); ++e) {
    const Edge& edge = map.edge(e);
    for (const ObservationSample& s : samples_[e].samples) {
      out += fmt::format("{},{},{},{}\n", edge.from, edge.to, s.k, s.seconds);
    }
  }
  return out;
}

double ExecutionResult::total_true_seconds() const {
  double total = 0.0;
  for (const TraversalRecord& t : traversals) total += t.true_seconds;
  return total;
}

double observe_with_snr(double true_value, double snr_db, std::mt19937_64& rng, double signal_rms) {
  if (std::isinf(snr_db) && snr_db > 0.0) return true_value;
  const double sigma = signal_rms * std::pow(10.0, -snr_db / 20.0);
  const double noisy = true_value + std::normal_distribution<double>(0.0, sigma)(rng);
  return std::max(noisy, 1e-3 * true_value);
}

// ---- World

World::World(const TopologyMap& map, WorldParams params, FloorCondition floor, std::uint64_t seed)
    : params_(params),
      battery_{1.0, params.discharge_per_second},
      floor_(std::move(floor)),
      seed_(seed),
      log_(map.edge_count()),
      observation_seed_(derive_seed(seed, "observation-noise")),
      signal_power_sum_(map.edge_count(), 0.0),
      signal_count_(map.edge_count(), 0) {
  params_.validate();
  if (!floor_.covers(map)) throw std::invalid_argument("floor condition does not cover every zone of the map");
}

double World::base_time(const TopologyMap& map, EdgeId edge) const {
  return map.edge(edge).length / params_.nominal_speed;
}

double World::expected_travel_time(const TopologyMap& map, EdgeId edge) const {
  const Edge& e = map.edge(edge);
  return base_time(map, edge) * params_.battery.factor(battery_.soc) *
         params_.roughness.of(floor_.level(e.zone_id));
}

double World::true_travel_time(const TopologyMap& map, EdgeId edge) const {
  return expected_travel_time(map, edge);
}

TraversalRecord World::traverse(const TopologyMap& map, NodeId from, NodeId to) {
  const EdgeId edge = map.edge_between(from, to);
  const double realised = true_travel_time(map, edge);
  // Keyed by traversal and edge so runs that differ only in noise level share
  // the same underlying deviate.
  std::mt19937_64 rng(derive_seed(observation_seed_, {traversal_count_, static_cast<std::uint64_t>(edge)}));
  double observed = realised;
  if (params_.snr_db) {
    signal_power_sum_[edge] += realised * realised;
    ++signal_count_[edge];
    const double rms = std::sqrt(signal_power_sum_[edge] / static_cast<double>(signal_count_[edge]));
    observed = observe_with_snr(realised, *params_.snr_db, rng, rms);
  } else if (params_.noise_cv > 0.0) {
    const double eps = std::normal_distribution<double>(0.0, params_.noise_cv)(rng);
    observed = realised * std::max(1.0 + eps, 0.05);
  }
  battery_.drain(realised);
  ++traversal_count_;
  log_.append(edge, traversal_count_, observed);
  return TraversalRecord{edge, from, to, traversal_count_, realised, observed};
}

ExecutionResult World::execute_edges(const TopologyMap& map, std::span<const NodeId> nodes) {
  ExecutionResult result;
  if (nodes.size() < 2) return result;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!map.find_edge(nodes[i], nodes[i + 1])) {
      throw std::invalid_argument("path nodes " + std::to_string(nodes[i]) + " and " +
                                  std::to_string(nodes[i + 1]) + " are not adjacent");
    }
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (battery_.depleted()) {
      result.depleted = true;
      break;
    }
    result.traversals.push_back(traverse(map, nodes[i], nodes[i + 1]));
  }
  return result;
}

ExecutionResult World::execute_path(const TopologyMap& map, const PathResult& path) {
  return execute_edges(map, path.nodes);
}

void World::replace_battery() { battery_.soc = 1.0; }

ObservationLog generate_observation_table(const TopologyMap& map, const World& world_template,
                                          std::size_t repeats) {
  if (repeats < 1) throw std::invalid_argument("observation table needs at least one repeat");
  ObservationLog table(map.edge_count());
  for (EdgeId e = 0; e < map.edge_count(); ++e) {
    World world = world_template;
    world.replace_battery();
    const Edge& edge = map.edge(e);
    const NodeId hop[] = {edge.from, edge.to};
    for (std::size_t k = 1; k <= repeats && !world.battery().depleted(); ++k) {
      const ExecutionResult r = world.execute_edges(map, hop);
      table.append(e, k, r.traversals.front().observed_seconds);
    }
  }
  return table;
}

}  // namespace ttroute
