#pragma once

#include <optional>

namespace ttroute {

/// Random-walk model of one edge's travel time:
///   X(k) = X(k-1) + w(k),   Y(k) = X(k) + n(k)
/// with process variance sigma2_omega and observation variance sigma2_eta.
struct ScalarKfState {
  double x_hat{0.0};
  double p{0.0};
  double sigma2_omega{0.05};
  double sigma2_eta{0.1};
};

struct ScalarKfStep {
  ScalarKfState state;
  double prior{0.0};
  double prior_variance{0.0};
  double gain{0.0};
  /// y - prior
  double innovation{0.0};

  double x_hat() const { return state.x_hat; }
};

/// Throws std::invalid_argument for negative or non-finite arguments.
ScalarKfState scalar_kf_init(double x0, double p0, double sigma2_omega = 0.05, double sigma2_eta = 0.1);

/// Starts from the mean of legacy observations when there are any,
/// otherwise from `fallback` (the edge's heuristic cost).
ScalarKfState scalar_kf_init_from_legacy(std::optional<double> legacy_mean, double fallback, double p0,
                                         double sigma2_omega = 0.05, double sigma2_eta = 0.1);

/// One predict/correct cycle. When both the prior variance and sigma2_eta
/// are zero the gain is taken as 0. Throws std::invalid_argument if y <= 0.
ScalarKfStep scalar_kf_step(const ScalarKfState& state, double y);

}  // namespace ttroute
