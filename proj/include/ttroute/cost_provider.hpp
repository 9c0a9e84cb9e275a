#pragma once
/**
 * Edge-cost providers queried by the planner while it expands nodes.
 *
 * Every provider answers "what will it cost to traverse (from, to) as the
 * k-th edge of the path being built?". The heuristic provider ignores k and
 * history; the Kalman providers keep one filter per physical edge.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttroute/bilinear_kf.hpp"
#include "ttroute/scalar_kf.hpp"
#include "ttroute/topo_map.hpp"
#include "ttroute/world_sim.hpp"

namespace ttroute {

enum class ProviderKind { heuristic, static_kf, dynamic_kf, frozen };

std::string_view to_string(ProviderKind kind);
/// Accepts heuristic|static|dynamic (and the *_kf spellings).
ProviderKind parse_provider_kind(std::string_view text);

struct EdgeQuery {
  NodeId from{0};
  NodeId to{0};
  EdgeId edge{0};
  /// 1 + number of predecessors of `from` on the current tree path.
  int k{1};
  /// Cost of the edge that reached `from` (0 at the source).
  double prev_cost{0.0};
  /// Costs X(0) .. X(k-1) along the tree path to `from`, X(0) = 0.
  std::span<const double> prefix_costs;
  /// Explicit observation; providers look one up themselves when absent.
  std::optional<double> observation;
};

struct ProviderDiagnostics {
  std::uint64_t estimates{0};
  std::uint64_t fallbacks{0};
  std::uint64_t clamps{0};
  std::uint64_t recoveries{0};
};

struct FilterTraceRow {
  NodeId edge_from{0};
  NodeId edge_to{0};
  int k{0};
  double prior{0.0};
  /// Scalar gain, or the norm of the gain vector for the bilinear filter.
  double gain_or_norm{0.0};
  double posterior{0.0};
  double observation{0.0};
};

/// CSV with columns edge_from,edge_to,k,prior,gain_or_norm,posterior,observation.
std::string filter_trace_csv(std::span<const FilterTraceRow> rows);

/// The static provider ran past the end of its observation table.
class ObservationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CostProvider {
 public:
  virtual ~CostProvider() = default;

  virtual ProviderKind kind() const = 0;
  /// Returns a strictly positive cost in seconds.
  virtual double estimate(const EdgeQuery& query) = 0;

  const ProviderDiagnostics& diagnostics() const { return diagnostics_; }
  /// Rows are appended to `sink` (not owned) while set.
  void set_trace_sink(std::vector<FilterTraceRow>* sink) { trace_ = sink; }

 protected:
  void trace(const EdgeQuery& q, double prior, double gain, double posterior, double observation);

  ProviderDiagnostics diagnostics_;

 private:
  std::vector<FilterTraceRow>* trace_{nullptr};
};

/// Validates k >= 1 and that the edge joins (from, to), then delegates.
double estimate_edge_cost(CostProvider& provider, const TopologyMap& map, const EdgeQuery& query);

class HeuristicProvider final : public CostProvider {
 public:
  HeuristicProvider(const TopologyMap& map, double nominal_speed);

  ProviderKind kind() const override { return ProviderKind::heuristic; }
  double estimate(const EdgeQuery& query) override;

 private:
  const TopologyMap* map_;
  double nominal_speed_;
};

/// Fixed per-edge costs; the planner's optimality reference.
class FrozenCostProvider final : public CostProvider {
 public:
  explicit FrozenCostProvider(std::vector<double> costs);

  ProviderKind kind() const override { return ProviderKind::frozen; }
  double estimate(const EdgeQuery& query) override;
  const std::vector<double>& costs() const { return costs_; }

 private:
  std::vector<double> costs_;
};

struct StaticKfConfig {
  double p0{1.0};
  double sigma2_omega{0.05};
  double sigma2_eta{0.1};
};

/// One random-walk scalar filter per edge, fed Y(k) from a pre-collected
/// observation table. Filters start at the edge's legacy mean.
class StaticKfProvider final : public CostProvider {
 public:
  StaticKfProvider(const TopologyMap& map, ObservationLog table, double nominal_speed, StaticKfConfig config = {});

  ProviderKind kind() const override { return ProviderKind::static_kf; }
  double estimate(const EdgeQuery& query) override;
  const ScalarKfState& filter(EdgeId edge) const { return filters_.at(edge); }

 private:
  ObservationLog table_;
  std::vector<ScalarKfState> filters_;
};

struct DynamicKfConfig {
  int regression_no{2};
  double phi{0.2};
  double coef_mean{0.1};
  double coef_variance{0.1};
  double xi_mean{0.1};
  double xi_variance{0.1};
  double q_scale{1.0};
  double r_scale{0.01};
  double p0_xi{0.1};
  double p0_x{1.0};

  void validate() const;
};

/// One bilinear-model filter per edge. Y(k) is the most recent runtime
/// observation of the edge in `live_log`; mu is its running mean. Before
/// the path prefix holds r travel times the running mean is returned.
class DynamicKfProvider final : public CostProvider {
 public:
  DynamicKfProvider(const TopologyMap& map, const ObservationLog& live_log, double nominal_speed,
                    DynamicKfConfig config, std::uint64_t seed);

  ProviderKind kind() const override { return ProviderKind::dynamic_kf; }
  double estimate(const EdgeQuery& query) override;

  const BilinearParams& coefficients() const { return params_; }
  /// Running mean of the edge's observations, or its heuristic cost.
  double running_mean(EdgeId edge) const;

  /// Replaces the observation source (used when a world is cloned).
  void rebind_log(const ObservationLog& live_log) { log_ = &live_log; }

 private:
  struct EdgeFilter {
    bool initialised{false};
    Eigen::MatrixXd P;
    std::vector<double> xi_history;
  };

  void reset(EdgeId edge, EdgeFilter& f);

  const TopologyMap* map_;
  const ObservationLog* log_;
  double nominal_speed_;
  DynamicKfConfig config_;
  BilinearParams params_;
  std::uint64_t xi_seed_;
  std::normal_distribution<double> xi_dist_;
  std::vector<EdgeFilter> filters_;
};

}  // namespace ttroute
