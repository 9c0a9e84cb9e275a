#include "ttroute/scalar_kf.hpp"

#include <cmath>
#include <stdexcept>

namespace ttroute {

ScalarKfState scalar_kf_init(double x0, double p0, double sigma2_omega, double sigma2_eta) {
  if (!std::isfinite(x0)) throw std::invalid_argument("initial estimate must be finite");
  if (!(p0 >= 0.0) || !std::isfinite(p0)) throw std::invalid_argument("initial variance must be >= 0");
  if (!(sigma2_omega >= 0.0) || !(sigma2_eta >= 0.0)) {
    throw std::invalid_argument("noise variances must be >= 0");
  }
  return ScalarKfState{x0, p0, sigma2_omega, sigma2_eta};
}

ScalarKfState scalar_kf_init_from_legacy(std::optional<double> legacy_mean, double fallback, double p0,
                                         double sigma2_omega, double sigma2_eta) {
  return scalar_kf_init(legacy_mean.value_or(fallback), p0, sigma2_omega, sigma2_eta);
}

ScalarKfStep scalar_kf_step(const ScalarKfState& state, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("observed travel time must be positive");

  ScalarKfStep step;
  step.prior = state.x_hat;
  step.prior_variance = state.p + state.sigma2_omega;
  const double denom = step.prior_variance + state.sigma2_eta;
  step.gain = denom > 0.0 ? step.prior_variance / denom : 0.0;
  step.innovation = y - step.prior;

  step.state = state;
  step.state.x_hat = step.prior + step.gain * step.innovation;
  step.state.p = denom > 0.0 ? step.prior_variance - step.prior_variance * step.prior_variance / denom : 0.0;
  // Cancellation can leave a tiny negative residue.
  if (step.state.p < 0.0) step.state.p = 0.0;
  return step;
}

}  // namespace ttroute
