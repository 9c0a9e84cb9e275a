#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ttroute/cost_provider.hpp"
#include "ttroute/seeding.hpp"

namespace ttroute {

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::heuristic:
      return "heuristic";
    case ProviderKind::static_kf:
      return "static";
    case ProviderKind::dynamic_kf:
      return "dynamic";
    case ProviderKind::frozen:
      return "frozen";
  }
  return "unknown";
}

ProviderKind parse_provider_kind(std::string_view text) {
  if (text == "heuristic" || text == "eucl") return ProviderKind::heuristic;
  if (text == "static" || text == "static_kf") return ProviderKind::static_kf;
  if (text == "dynamic" || text == "dynamic_kf") return ProviderKind::dynamic_kf;
  throw std::invalid_argument("unknown provider '" + std::string(text) + "'");
}

std::string filter_trace_csv(std::span<const FilterTraceRow> rows) {
  std::string out = "edge_from,edge_to,k,prior,gain_or_norm,posterior,observation\n";
  for (const FilterTraceRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.edge_from, r.edge_to, r.k, r.prior, r.gain_or_norm, r.posterior,
                       r.observation);
  }
  return out;
}

void CostProvider::trace(const EdgeQuery& q, double prior, double gain, double posterior, double observation) {
  if (trace_ != nullptr) trace_->push_back({q.from, q.to, q.k, prior, gain, posterior, observation});
}

double estimate_edge_cost(CostProvider& provider, const TopologyMap& map, const EdgeQuery& query) {
  if (query.k < 1) throw std::invalid_argument("traversal depth k must be >= 1");
  const auto edge = map.find_edge(query.from, query.to);
  if (!edge || *edge != query.edge) {
    throw std::out_of_range(fmt::format("no edge ({}, {}) with id {}", query.from, query.to, query.edge));
  }
  const double cost = provider.estimate(query);
  if (!(cost > 0.0) || !std::isfinite(cost)) {
    throw std::logic_error(fmt::format("provider returned non-positive cost {} for edge ({}, {})", cost, query.from,
                                       query.to));
  }
  return cost;
}

// ---- heuristic

HeuristicProvider::HeuristicProvider(const TopologyMap& map, double nominal_speed)
    : map_(&map), nominal_speed_(nominal_speed) {
  if (!(nominal_speed > 0.0)) throw std::invalid_argument("nominal speed must be positive");
}

double HeuristicProvider::estimate(const EdgeQuery& query) {
  ++diagnostics_.estimates;
  return heuristic_cost(*map_, query.from, query.to, nominal_speed_);
}

// ---- frozen

FrozenCostProvider::FrozenCostProvider(std::vector<double> costs) : costs_(std::move(costs)) {
  for (double c : costs_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("frozen costs must be positive");
  }
}

double FrozenCostProvider::estimate(const EdgeQuery& query) {
  ++diagnostics_.estimates;
  return costs_.at(query.edge);
}

// ---- static

StaticKfProvider::StaticKfProvider(const TopologyMap& map, ObservationLog table, double nominal_speed,
                                   StaticKfConfig config)
    : table_(std::move(table)) {
  if (table_.edge_count() != map.edge_count()) {
    throw std::invalid_argument("observation table does not match the map");
  }
  filters_.reserve(map.edge_count());
  for (EdgeId e = 0; e < map.edge_count(); ++e) {
    const Edge& edge = map.edge(e);
    filters_.push_back(scalar_kf_init_from_legacy(table_.mean(e), heuristic_cost(map, edge.from, edge.to, nominal_speed),
                                                  config.p0, config.sigma2_omega, config.sigma2_eta));
  }
}

double StaticKfProvider::estimate(const EdgeQuery& query) {
  ++diagnostics_.estimates;
  std::optional<double> y = query.observation;
  if (!y) y = table_.at_index(query.edge, static_cast<std::size_t>(query.k));
  if (!y) {
    throw ObservationExhausted(
        fmt::format("no legacy observation for edge ({}, {}) at k = {}", query.from, query.to, query.k));
  }
  ScalarKfState& filter = filters_.at(query.edge);
  const ScalarKfStep step = scalar_kf_step(filter, *y);
  filter = step.state;
  trace(query, step.prior, step.gain, step.x_hat(), *y);
  return step.x_hat();
}

// ---- dynamic

void DynamicKfConfig::validate() const {
  if (regression_no < 2) throw std::invalid_argument("regression_no must be >= 2");
  if (!(coef_variance >= 0.0) || !(xi_variance >= 0.0)) throw std::invalid_argument("variances must be >= 0");
  if (!(q_scale >= 0.0) || !(r_scale >= 0.0)) throw std::invalid_argument("noise scales must be >= 0");
  if (!(p0_xi >= 0.0) || !(p0_x >= 0.0)) throw std::invalid_argument("initial variances must be >= 0");
}

DynamicKfProvider::DynamicKfProvider(const TopologyMap& map, const ObservationLog& live_log, double nominal_speed,
                                     DynamicKfConfig config, std::uint64_t seed)
    : map_(&map),
      log_(&live_log),
      nominal_speed_(nominal_speed),
      config_(config),
      xi_seed_(derive_seed(seed, "bilinear-xi")),
      xi_dist_(config.xi_mean, std::sqrt(config.xi_variance)),
      filters_(map.edge_count()) {
  config_.validate();
  if (!(nominal_speed > 0.0)) throw std::invalid_argument("nominal speed must be positive");
  std::mt19937_64 rng(derive_seed(seed, "bilinear-coefficients"));
  params_ = BilinearParams::draw(config_.regression_no, rng, config_.phi, config_.coef_mean, config_.coef_variance);
  params_.q_scale = config_.q_scale;
  params_.r_scale = config_.r_scale;
}

double DynamicKfProvider::running_mean(EdgeId edge) const {
  if (auto m = log_->mean(edge)) return *m;
  const Edge& e = map_->edge(edge);
  return heuristic_cost(*map_, e.from, e.to, nominal_speed_);
}

void DynamicKfProvider::reset(EdgeId edge, EdgeFilter& f) {
  const int r = config_.regression_no;
  const int n = 2 * r + 1;
  f.P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < r; ++i) {
    f.P(1 + i, 1 + i) = config_.p0_xi;
    f.P(1 + r + i, 1 + r + i) = config_.p0_x;
  }
  if (!f.initialised) {
    std::mt19937_64 rng(derive_seed(xi_seed_, {static_cast<std::uint64_t>(edge)}));
    f.xi_history.resize(r);
    for (double& xi : f.xi_history) xi = std::normal_distribution<double>(xi_dist_.param())(rng);
  }
  f.initialised = true;
}

double DynamicKfProvider::estimate(const EdgeQuery& query) {
  ++diagnostics_.estimates;
  const int r = config_.regression_no;
  const double mean = running_mean(query.edge);

  if (query.k < r || static_cast<int>(query.prefix_costs.size()) < r) {
    ++diagnostics_.fallbacks;
    return mean;
  }

  EdgeFilter& f = filters_.at(query.edge);
  if (!f.initialised) reset(query.edge, f);

  const double y = query.observation.value_or(log_->latest(query.edge).value_or(mean));
  const auto x_window = query.prefix_costs.last(static_cast<std::size_t>(r));

  BilinearKfState state = BilinearKfState::from_histories(f.xi_history, x_window, 0.0, 0.0);
  state.P = f.P;
  BilinearParams params = params_;
  params.mu = mean;

  // Keyed draws keep runs that differ only in observation noise on common
  // random numbers.
  std::mt19937_64 rng(derive_seed(xi_seed_, {static_cast<std::uint64_t>(query.edge),
                                             static_cast<std::uint64_t>(query.k), log_->samples(query.edge).size()}));
  const double xi_k = std::normal_distribution<double>(xi_dist_.param())(rng);
  BilinearStep step = bilinear_kf_step(state, params, y, xi_k);

  if (!step.state.s.allFinite() || !step.state.P.allFinite()) {
    ++diagnostics_.recoveries;
    reset(query.edge, f);
    trace(query, mean, 0.0, mean, y);
    return mean;
  }
  f.P = step.state.P;
  f.xi_history = step.state.xi_history;

  double estimate = step.x_hat;
  if (!(estimate > 0.0)) {
    ++diagnostics_.clamps;
    estimate = 0.1 * mean;
  }
  trace(query, step.prior(2 * r), step.gain.norm(), estimate, y);
  return estimate;
}

}  // namespace ttroute
