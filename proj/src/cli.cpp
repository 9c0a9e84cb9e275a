#include "ttroute/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ttroute/experiments.hpp"
#include "ttroute/planner.hpp"

namespace ttroute {
namespace {

namespace fs = std::filesystem;

// Raised while turning flags into a configuration; reported as a usage error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::string out{"."};
  std::optional<std::uint64_t> seed;
  std::string map;
  std::string provider;
  std::optional<int> repetitions;
  std::optional<int> regression_no;
  std::string snr;
};

const CLI::Validator kMapSelector(
    [](std::string& value) -> std::string {
      if (value == "1" || value == "2" || value == "3" || fs::is_regular_file(value)) return {};
      return "map must be 1, 2, 3 or an existing map file: " + value;
    },
    "1|2|3|PATH", "map selector");

void add_out(CLI::App* app, CommonFlags& f) {
  app->add_option("-o,--out", f.out, "Output directory (created if missing)")->capture_default_str();
}

void add_seed(CLI::App* app, CommonFlags& f) { app->add_option("--seed", f.seed, "Master random seed"); }

void add_map(CLI::App* app, CommonFlags& f) {
  app->add_option("--map", f.map, "Map: 1, 2, 3 or a map JSON file")->check(kMapSelector);
}

void add_provider(CLI::App* app, CommonFlags& f) {
  app->add_option("--provider", f.provider, "Edge-cost provider")
      ->check(CLI::IsMember({"heuristic", "static", "dynamic"}));
}

void add_experiment_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "Experiment config JSON")->check(CLI::ExistingFile);
  add_out(app, f);
  add_seed(app, f);
  add_map(app, f);
  add_provider(app, f);
  app->add_option("--repetitions", f.repetitions, "Planning calls per cell")->check(CLI::IsMember({20, 40, 60, 80}));
  app->add_option("--regression-no", f.regression_no, "Bilinear model order r")->check(CLI::Range(2, 9));
  app->add_option("--snr", f.snr, "Observation SNR in dB")->check(CLI::IsMember({"10", "25", "50", "inf"}));
}

std::optional<double> parse_snr(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(text);
}

ExperimentConfig build_config(const CommonFlags& f) {
  try {
    ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
    if (f.seed) cfg.seeds = {*f.seed};
    if (!f.map.empty()) {
      if (cfg.map != f.map) cfg.od_list.clear();  // pairs of another map do not carry over
      cfg.map = f.map;
    }
    if (!f.provider.empty()) cfg.providers = {parse_provider_kind(f.provider)};
    if (f.repetitions) cfg.repetitions = *f.repetitions;
    if (f.regression_no) cfg.regression_no = *f.regression_no;
    if (!f.snr.empty()) cfg.snr_db = parse_snr(f.snr);
    cfg.validate_runnable();
    return cfg;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  fs::create_directories(out);
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  file << content;
  if (!file) throw std::runtime_error("cannot write " + path.string());
  spdlog::info("wrote {}", path.string());
}

void configure_logging() {
  auto logger = spdlog::get("ttroute");
  if (!logger) {
    logger = spdlog::stderr_color_mt("ttroute");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TTROUTE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

// ---- subcommands

struct GenMapFlags {
  std::string family{"winding"};
  std::uint64_t seed{0};
  std::optional<int> rows;
  std::optional<int> cols;
  std::optional<double> spacing;
  std::optional<double> max_detour;
  std::optional<double> rack_fraction;
  std::optional<double> detour_fraction;
  std::optional<int> cross_every;
  std::optional<int> zone_cols;
  std::optional<int> zone_rows;
  std::string out{"."};
};

int cmd_gen_map(const GenMapFlags& f) {
  MapFamily family;
  GeneratorParams params;
  try {
    family = parse_map_family(f.family);
    params = default_params(family);
    if (f.rows) params.rows = *f.rows;
    if (f.cols) params.cols = *f.cols;
    if (f.spacing) params.spacing = *f.spacing;
    if (f.max_detour) params.max_detour = *f.max_detour;
    if (f.rack_fraction) params.rack_fraction = *f.rack_fraction;
    if (f.detour_fraction) params.detour_fraction = *f.detour_fraction;
    if (f.cross_every) params.cross_every = *f.cross_every;
    if (f.zone_cols) params.zone_cols = *f.zone_cols;
    if (f.zone_rows) params.zone_rows = *f.zone_rows;
    params.validate(family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const TopologyMap map = builtin_map(family, params, f.seed);
  const fs::path path = prepare_out(f.out) / fmt::format("{}-{}.json", to_string(family), f.seed);
  save_map(map, path);
  fmt::print("{} ({} nodes, {} edges)\n", path.string(), map.node_count(), map.edge_count());
  return 0;
}

struct OdFlags {
  std::optional<NodeId> source;
  std::optional<NodeId> dest;
};

void add_od(CLI::App* app, OdFlags& od) {
  app->add_option("--source", od.source, "Source node id");
  app->add_option("--dest", od.dest, "Destination node id");
}

int cmd_plan(const CommonFlags& f, const OdFlags& od, bool write_trace) {
  CommonFlags flags = f;
  if (flags.map.empty()) flags.map = "1";
  ExperimentConfig cfg = build_config(flags);
  if (!od.source || !od.dest) throw UsageError("plan needs --source and --dest");
  cfg.od_list = {{*od.source, *od.dest}};
  cfg.repetitions = 1;
  const TopologyMap map = resolve_map(cfg.map);
  if (*od.source >= map.node_count() || *od.dest >= map.node_count()) throw UsageError("node id not in map");

  CellArtifacts artifacts;
  const CellSummary cell = run_cell(map, cfg, cfg.providers.front(), cfg.seeds.front(), &artifacts);
  const CallRecord& r = cell.records.front();
  fmt::print("{} {} -> {}: {} (est {:.3f} s, true {:.3f} s)\n", to_string(cell.provider), r.source, r.dest,
             format_node_sequence(r.nodes), r.total_est_cost, r.total_true_cost);
  if (write_trace) {
    const fs::path out = prepare_out(f.out);
    write_file(out / "paths.csv", paths_csv(cell.records));
    write_file(out / "trace.csv", filter_trace_csv(artifacts.trace));
  }
  return 0;
}

int cmd_simulate(const CommonFlags& f) {
  ExperimentConfig cfg = build_config(f);
  const TopologyMap map = resolve_map(cfg.map);
  const fs::path out = prepare_out(f.out);
  const ProviderKind provider = f.provider.empty() ? ProviderKind::dynamic_kf : cfg.providers.front();
  CellArtifacts artifacts;
  const CellSummary cell = run_cell(map, cfg, provider, cfg.seeds.front(), &artifacts);
  write_file(out / "paths.csv", paths_csv(cell.records));
  write_file(out / "observations.csv", artifacts.observations.to_csv(map));
  write_file(out / "trace.csv", filter_trace_csv(artifacts.trace));
  fmt::print("{} calls, mean est {:.3f} s, mean true {:.3f} s, {} battery swaps\n", cell.records.size(),
             cell.mean_est_cost, cell.mean_true_cost, cell.depletion_events);
  return 0;
}

void write_summaries(const fs::path& out, const std::vector<ExperimentSummary>& summaries) {
  write_file(out / "summary.csv", summary_csv(summaries));
  write_file(out / "records.csv", records_csv(summaries));
  for (const ExperimentSummary& s : summaries) {
    for (const CellSummary& c : s.cells) {
      fmt::print("{:<10} r={} snr={:<5} seed={:<4} est {:9.3f}  true {:9.3f}  saving {:6.2f}%\n",
                 to_string(c.provider), c.regression_no, format_snr(c.snr_db), c.seed, c.mean_est_cost,
                 c.mean_true_cost, c.saving_pct_vs_heuristic);
    }
  }
}

int cmd_experiment(const CommonFlags& f) {
  const ExperimentConfig cfg = build_config(f);
  const fs::path out = prepare_out(f.out);
  write_summaries(out, {run_repetitions(cfg)});
  return 0;
}

int cmd_sweep(const CommonFlags& f, const std::string& kind) {
  ExperimentConfig cfg = build_config(f);
  const fs::path out = prepare_out(f.out);
  if (f.provider.empty() && f.config.empty()) cfg.providers = {ProviderKind::dynamic_kf};
  if (kind == "regression") {
    const std::vector<int> r_values{2, 3, 4, 5, 6, 7, 8, 9};
    write_summaries(out, sweep_regression(cfg, r_values));
  } else {
    const std::vector<double> snr_values{10.0, 25.0, 50.0};
    write_summaries(out, sweep_snr(cfg, snr_values));
  }
  return 0;
}

int cmd_compare(const CommonFlags& f, const OdFlags& od, const std::string& scenario, int warmup) {
  CommonFlags flags = f;
  if (flags.map.empty()) flags.map = "2";
  const ExperimentConfig cfg = build_config(flags);
  CompareOptions options;
  try {
    options.scenario = parse_scenario_kind(scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  options.warmup_calls = warmup;
  options.seed = cfg.seeds.front();
  if (od.source.has_value() != od.dest.has_value()) throw UsageError("give both --source and --dest or neither");
  if (od.source) options.od = OdPair{*od.source, *od.dest};

  const TopologyMap map = resolve_map(cfg.map);
  const ComparisonReport report = compare_paths(map, cfg, options);
  const fs::path out = prepare_out(f.out);
  write_file(out / "comparison.csv", comparison_csv(map, report));
  fmt::print("{} -> {} after {} calls, {} shared edges\n", report.od.first, report.od.second, warmup,
             report.shared_edges.size());
  for (std::size_t p = 0; p < 3; ++p) {
    fmt::print("{:<10} true {:9.3f} s  saving {:6.2f}%  {}\n", to_string(ComparisonReport::kProviders[p]),
               report.true_costs[p], report.saving_pct[p], format_node_sequence(report.paths[p].nodes));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Travel-time aware route planning on warehouse topology maps"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenMapFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-map", "Generate a topology map and write it as JSON");
  gen_cmd->add_option("--family", gen.family, "Map family")
      ->check(CLI::IsMember({"winding", "winding_racks", "random", "random_racks", "hub"}))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--rows", gen.rows, "Rack rows, or ring levels for hub maps");
  gen_cmd->add_option("--cols", gen.cols, "Nodes per aisle, or spokes for hub maps");
  gen_cmd->add_option("--spacing", gen.spacing, "Grid spacing in metres");
  gen_cmd->add_option("--max-detour", gen.max_detour, "Largest relative excess of link length over distance");
  gen_cmd->add_option("--rack-fraction", gen.rack_fraction, "Fraction of links blocked (random family)");
  gen_cmd->add_option("--detour-fraction", gen.detour_fraction, "Share of links that wind");
  gen_cmd->add_option("--cross-every", gen.cross_every, "Cross aisles (or rings) every this many columns (levels)");
  gen_cmd->add_option("--zone-cols", gen.zone_cols, "Floor zone grid columns");
  gen_cmd->add_option("--zone-rows", gen.zone_rows, "Floor zone grid rows");
  gen_cmd->add_option("-o,--out", gen.out, "Output directory")->capture_default_str();

  CommonFlags plan_flags;
  OdFlags plan_od;
  bool plan_trace = false;
  auto* plan_cmd = app.add_subcommand("plan", "Plan one route with a fresh world");
  add_map(plan_cmd, plan_flags);
  add_provider(plan_cmd, plan_flags);
  add_seed(plan_cmd, plan_flags);
  add_out(plan_cmd, plan_flags);
  add_od(plan_cmd, plan_od);
  plan_cmd->add_option("--config", plan_flags.config, "Experiment config JSON")->check(CLI::ExistingFile);
  plan_cmd->add_flag("--write", plan_trace, "Write paths.csv and trace.csv to the output directory");

  CommonFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one provider over the planning schedule");
  add_experiment_flags(sim_cmd, sim_flags);

  CommonFlags exp_flags;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a repetition experiment; writes summary.csv and records.csv");
  add_experiment_flags(exp_cmd, exp_flags);

  CommonFlags sweep_flags;
  std::string sweep_kind{"regression"};
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the regression order (2..9) or the SNR (10, 25, 50 dB)");
  add_experiment_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--kind", sweep_kind, "What to sweep")
      ->check(CLI::IsMember({"regression", "snr"}))
      ->capture_default_str();

  CommonFlags cmp_flags;
  OdFlags cmp_od;
  std::string cmp_scenario{"battery"};
  int cmp_warmup = 40;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare heuristic, static and dynamic paths for one pair");
  add_experiment_flags(cmp_cmd, cmp_flags);
  add_od(cmp_cmd, cmp_od);
  cmp_cmd->add_option("--scenario", cmp_scenario, "World scenario")
      ->check(CLI::IsMember({"none", "battery", "floor", "battery_floor", "default"}))
      ->capture_default_str();
  cmp_cmd->add_option("--warmup", cmp_warmup, "Planning calls before the compared one")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ttroute: " << e.what() << "\n";
    const auto selected = app.get_subcommands();
    std::cerr << (selected.empty() ? app.help() : selected.front()->help());
    return 2;
  }

  configure_logging();
  try {
    if (*gen_cmd) return cmd_gen_map(gen);
    if (*plan_cmd) return cmd_plan(plan_flags, plan_od, plan_trace);
    if (*sim_cmd) return cmd_simulate(sim_flags);
    if (*exp_cmd) return cmd_experiment(exp_flags);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, sweep_kind);
    if (*cmp_cmd) return cmd_compare(cmp_flags, cmp_od, cmp_scenario, cmp_warmup);
  } catch (const UsageError& e) {
    std::cerr << "ttroute: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ttroute: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ttroute
