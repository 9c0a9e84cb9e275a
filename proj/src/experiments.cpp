#include "ttroute/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>

#include "ttroute/exact_sum.hpp"
#include "ttroute/planner.hpp"
#include "ttroute/seeding.hpp"

namespace ttroute {
namespace {

std::vector<OdPair> od_schedule(const TopologyMap& map, const ExperimentConfig& config) {
  if (!config.od_list.empty()) {
    for (const auto& [s, d] : config.od_list) {
      if (s >= map.node_count() || d >= map.node_count()) {
        throw std::invalid_argument("od pair (" + std::to_string(s) + ", " + std::to_string(d) + ") not in map");
      }
    }
    return config.od_list;
  }
  return default_od_list(map, derive_seed(map.meta().seed, "od-list"));
}

WorldParams world_params(const Scenario& scenario, const ExperimentConfig& config) {
  WorldParams params = scenario.apply(config.world);
  if (config.snr_db) params.snr_db = config.snr_db;
  return params;
}

// Everything one provider needs to run a schedule: its own world, the
// provider bound to that world's log, and the scripted events.
struct Session {
  const TopologyMap* map;
  Scenario scenario;
  World world;
  std::unique_ptr<CostProvider> provider;
  int depletions{0};

  Session(const TopologyMap& m, const ExperimentConfig& config, ScenarioKind kind, ProviderKind provider_kind,
          std::uint64_t seed)
      : Session(m, config, make_scenario(kind, m), provider_kind, seed) {}

  Session(const TopologyMap& m, const ExperimentConfig& config, Scenario scn, ProviderKind provider_kind,
          std::uint64_t seed)
      : map(&m),
        scenario(std::move(scn)),
        world(m, world_params(scenario, config), scenario.initial, derive_seed(seed, "world")) {
    const double speed = world.params().nominal_speed;
    switch (provider_kind) {
      case ProviderKind::heuristic:
        provider = std::make_unique<HeuristicProvider>(m, speed);
        break;
      case ProviderKind::static_kf: {
        // Legacy data come from a separate run recorded under the
        // scenario's initial floor.
        const World legacy(m, world.params(), scenario.initial, derive_seed(seed, "legacy"));
        provider = std::make_unique<StaticKfProvider>(m, generate_observation_table(m, legacy, config.legacy_repeats),
                                                      speed, config.static_kf);
        break;
      }
      case ProviderKind::dynamic_kf: {
        DynamicKfConfig dyn = config.dynamic_kf;
        dyn.regression_no = config.regression_no;
        provider = std::make_unique<DynamicKfProvider>(m, world.log(), speed, dyn, derive_seed(seed, "dynamic"));
        break;
      }
      case ProviderKind::frozen:
        throw std::invalid_argument("experiments do not run the frozen provider");
    }
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void apply_events(int call_index) {
    for (const FloorEvent& e : scenario.events) {
      if (e.call_index == call_index) world.set_zone_level(e.zone, e.level);
    }
  }

  // Executes the whole path; an empty battery is swapped and the walk resumes.
  static double execute(World& w, const TopologyMap& m, const PathResult& path, bool& depleted) {
    ExecutionResult first = w.execute_path(m, path);
    double total = first.total_true_seconds();
    depleted = first.depleted;
    if (first.depleted) {
      w.replace_battery();
      const std::span<const NodeId> rest(path.nodes.begin() + static_cast<std::ptrdiff_t>(first.traversals.size()),
                                         path.nodes.end());
      total += w.execute_edges(m, rest).total_true_seconds();
    }
    return total;
  }

  CallRecord call(int call_index, OdPair od) {
    apply_events(call_index);
    const PathResult path = plan(*map, *provider, od.first, od.second);
    CallRecord rec;
    rec.call_index = call_index;
    rec.source = od.first;
    rec.dest = od.second;
    rec.nodes = path.nodes;
    rec.edges = path.edges;
    rec.total_est_cost = path.total_est_cost;
    rec.total_true_cost = execute(world, *map, path, rec.depleted);
    if (rec.depleted) ++depletions;
    return rec;
  }
};

double saving_pct(double baseline, double candidate) {
  return baseline > 0.0 ? 100.0 * (baseline - candidate) / baseline : 0.0;
}

std::string map_label(const TopologyMap& map, const ExperimentConfig& config) {
  return map.meta().name.empty() ? config.map : map.meta().name;
}

// Runs jobs [0, n) on up to `threads` workers; each job writes its own slot.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

const CellSummary& ExperimentSummary::cell(ProviderKind provider, std::uint64_t seed) const {
  for (const CellSummary& c : cells) {
    if (c.provider == provider && c.seed == seed) return c;
  }
  throw std::out_of_range("no cell for provider " + std::string(to_string(provider)) + " seed " +
                          std::to_string(seed));
}

std::vector<const CellSummary*> ExperimentSummary::cells_for(ProviderKind provider) const {
  std::vector<const CellSummary*> out;
  for (const CellSummary& c : cells) {
    if (c.provider == provider) out.push_back(&c);
  }
  return out;
}

namespace {
template <typename Field>
double mean_over_cells(const ExperimentSummary& s, ProviderKind provider, Field field) {
  std::vector<double> values;
  for (const CellSummary* c : s.cells_for(provider)) values.push_back(field(*c));
  return exact_mean(values);
}
}  // namespace

double ExperimentSummary::mean_est_cost(ProviderKind provider) const {
  return mean_over_cells(*this, provider, [](const CellSummary& c) { return c.mean_est_cost; });
}

double ExperimentSummary::mean_true_cost(ProviderKind provider) const {
  return mean_over_cells(*this, provider, [](const CellSummary& c) { return c.mean_true_cost; });
}

double ExperimentSummary::mean_saving_pct(ProviderKind provider) const {
  return mean_over_cells(*this, provider, [](const CellSummary& c) { return c.saving_pct_vs_heuristic; });
}

CellSummary run_cell(const TopologyMap& map, const ExperimentConfig& config, ProviderKind provider,
                     std::uint64_t seed, CellArtifacts* artifacts) {
  config.validate_runnable();
  const std::vector<OdPair> schedule = od_schedule(map, config);
  if (schedule.empty()) throw std::invalid_argument("od list is empty");

  Session session(map, config, config.scenario, provider, seed);
  if (artifacts != nullptr) session.provider->set_trace_sink(&artifacts->trace);

  CellSummary cell;
  cell.map = map_label(map, config);
  cell.provider = provider;
  cell.repetitions = config.repetitions;
  cell.regression_no = config.regression_no;
  cell.snr_db = config.snr_db;
  cell.seed = seed;

  std::vector<double> est;
  std::vector<double> truth;
  for (int i = 0; i < config.repetitions; ++i) {
    CallRecord rec = session.call(i, schedule[static_cast<std::size_t>(i) % schedule.size()]);
    est.push_back(rec.total_est_cost);
    truth.push_back(rec.total_true_cost);
    cell.records.push_back(std::move(rec));
  }
  cell.mean_est_cost = exact_mean(est);
  cell.mean_true_cost = exact_mean(truth);
  cell.diagnostics = session.provider->diagnostics();
  cell.depletion_events = session.depletions;
  if (artifacts != nullptr) {
    session.provider->set_trace_sink(nullptr);
    artifacts->observations = session.world.log();
  }
  return cell;
}

ExperimentSummary run_repetitions(const ExperimentConfig& config) {
  const TopologyMap map = resolve_map(config.map);
  return run_repetitions(map, config);
}

ExperimentSummary run_repetitions(const TopologyMap& map, const ExperimentConfig& config) {
  config.validate_runnable();

  // The heuristic baseline is always needed for savings, listed or not.
  std::vector<ProviderKind> kinds = config.providers;
  const bool heuristic_listed = std::find(kinds.begin(), kinds.end(), ProviderKind::heuristic) != kinds.end();
  if (!heuristic_listed) kinds.insert(kinds.begin(), ProviderKind::heuristic);

  const std::size_t n_seeds = config.seeds.size();
  std::vector<CellSummary> cells(kinds.size() * n_seeds);
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    cells[i] = run_cell(map, config, kinds[i / n_seeds], config.seeds[i % n_seeds]);
  });

  std::vector<double> baseline(n_seeds);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].provider == ProviderKind::heuristic) baseline[i % n_seeds] = cells[i].mean_true_cost;
  }
  ExperimentSummary summary;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellSummary& c = cells[i];
    if (c.provider == ProviderKind::heuristic && !heuristic_listed) continue;
    c.saving_pct_vs_heuristic = saving_pct(baseline[i % n_seeds], c.mean_true_cost);
    summary.cells.push_back(std::move(c));
  }
  return summary;
}

std::vector<ExperimentSummary> sweep_regression(const ExperimentConfig& base, std::span<const int> r_values) {
  if (std::find(base.providers.begin(), base.providers.end(), ProviderKind::dynamic_kf) == base.providers.end()) {
    throw std::invalid_argument("regression sweeps need the dynamic provider");
  }
  const TopologyMap map = resolve_map(base.map);
  std::vector<ExperimentSummary> out;
  for (int r : r_values) {
    ExperimentConfig cfg = base;
    cfg.regression_no = r;
    out.push_back(run_repetitions(map, cfg));
  }
  return out;
}

std::vector<ExperimentSummary> sweep_snr(const ExperimentConfig& base, std::span<const double> snr_values) {
  if (std::find(base.providers.begin(), base.providers.end(), ProviderKind::dynamic_kf) == base.providers.end()) {
    throw std::invalid_argument("snr sweeps need the dynamic provider");
  }
  const TopologyMap map = resolve_map(base.map);
  std::vector<ExperimentSummary> out;
  for (double snr : snr_values) {
    ExperimentConfig cfg = base;
    cfg.snr_db = snr;
    out.push_back(run_repetitions(map, cfg));
  }
  return out;
}

ComparisonReport compare_paths(const TopologyMap& map, const ExperimentConfig& config, const CompareOptions& options) {
  config.validate_runnable();
  if (options.warmup_calls < 0) throw std::invalid_argument("warm-up calls must be >= 0");
  const std::vector<OdPair> schedule = od_schedule(map, config);
  if (schedule.empty()) throw std::invalid_argument("od list is empty");

  ComparisonReport report;
  report.od = options.od.value_or(schedule.front());
  if (report.od.first >= map.node_count() || report.od.second >= map.node_count()) {
    throw std::invalid_argument("od pair not in map");
  }

  std::optional<World> snapshot;
  for (std::size_t p = 0; p < ComparisonReport::kProviders.size(); ++p) {
    Session session(map, config, options.custom.value_or(make_scenario(options.scenario, map)),
                    ComparisonReport::kProviders[p], options.seed);
    for (int i = 0; i < options.warmup_calls; ++i) {
      session.call(i, schedule[static_cast<std::size_t>(i) % schedule.size()]);
    }
    session.apply_events(options.warmup_calls);
    report.paths[p] = plan(map, *session.provider, report.od.first, report.od.second);
    if (p == 0) snapshot = session.world;
  }

  for (std::size_t p = 0; p < report.paths.size(); ++p) {
    World w = *snapshot;
    bool depleted = false;
    report.true_costs[p] = Session::execute(w, map, report.paths[p], depleted);
    report.saving_pct[p] = saving_pct(report.true_costs[0], report.true_costs[p]);
  }

  std::array<std::set<EdgeId>, 3> sets;
  for (std::size_t p = 0; p < 3; ++p) sets[p] = {report.paths[p].edges.begin(), report.paths[p].edges.end()};
  for (EdgeId e : sets[0]) {
    if (sets[1].contains(e) && sets[2].contains(e)) report.shared_edges.push_back(e);
  }
  for (std::size_t p = 0; p < 3; ++p) {
    for (EdgeId e : sets[p]) {
      if (!sets[(p + 1) % 3].contains(e) && !sets[(p + 2) % 3].contains(e)) report.distinct_edges[p].push_back(e);
    }
  }
  return report;
}

double real_cost_delta(double total_cost, int rough_edge_count, double delta) {
  if (rough_edge_count < 0) throw std::invalid_argument("rough edge count must be >= 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  return total_cost + rough_edge_count * delta;
}

double real_cost_delta(const PathResult& path, int rough_edge_count, double delta) {
  if (rough_edge_count > static_cast<int>(path.edge_count())) {
    throw std::invalid_argument("rough edge count exceeds the path's edges");
  }
  return real_cost_delta(path.total_est_cost, rough_edge_count, delta);
}

int count_rough_edges(const TopologyMap& map, const PathResult& path, const FloorCondition& floor) {
  int n = 0;
  for (EdgeId e : path.edges) {
    if (floor.level(map.edge(e).zone_id) != FloorLevel::smooth) ++n;
  }
  return n;
}

}  // namespace ttroute
