#pragma once
/**
 * Kalman filter over the state-space form of a bilinear time-series model
 * of travel time.
 *
 * With regression order r the state is
 *
 *   s = (1, xi(k-r+1) .. xi(k), X(k-r+1) .. X(k))          (dimension 2r+1)
 *
 * and the transition matrix F shifts both windows, keeps the constant, and
 * forms the new travel time from the last row
 *
 *   [mu, psi_r .. psi_1, -phi_r .. -phi_1],  psi_l = b_l + sum_{i=1..l} c_{l,i} X(k-i).
 *
 * V injects the new innovation into the newest xi and X slots, H reads the
 * newest X, and process noise enters through G = V with Q = q_scale V V^T.
 */

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ttroute {

struct BilinearParams {
  int r{2};
  std::vector<double> phi;
  std::vector<double> b;
  /// r x r; only the lower triangle (i <= l) enters psi_l.
  Eigen::MatrixXd c;
  /// Running mean of the edge's travel time.
  double mu{0.0};
  double q_scale{1.0};
  double r_scale{0.01};

  int dim() const { return 2 * r + 1; }
  void validate() const;

  /// phi_i = phi_value; b and c drawn from N(coef_mean, coef_variance).
  static BilinearParams draw(int r, std::mt19937_64& rng, double phi_value = 0.2, double coef_mean = 0.1,
                             double coef_variance = 0.1);
};

struct BilinearKfState {
  Eigen::VectorXd s;
  Eigen::MatrixXd P;
  std::vector<double> xi_history;  // oldest first, length r
  std::vector<double> x_history;   // oldest first, length r

  /// s assembled from the histories, P = diag(0, p_xi.., p_x..).
  static BilinearKfState from_histories(std::span<const double> xi_history, std::span<const double> x_history,
                                        double p_xi, double p_x);
};

/// psi_1 .. psi_r for the X window (oldest first).
std::vector<double> psi_terms(const BilinearParams& params, std::span<const double> x_history);

/// Throws std::invalid_argument when a history length differs from r.
Eigen::MatrixXd build_F(const BilinearParams& params, std::span<const double> x_history,
                        std::span<const double> xi_history);
Eigen::VectorXd innovation_input(int r);  // V
Eigen::RowVectorXd observation_row(int r);  // H

struct BilinearStep {
  BilinearKfState state;
  Eigen::VectorXd prior;
  Eigen::VectorXd gain;
  double residual{0.0};
  double x_hat{0.0};
};

/// One predict/correct cycle with observation y and innovation draw xi_k.
/// Throws std::invalid_argument for y <= 0 or a malformed state.
BilinearStep bilinear_kf_step(const BilinearKfState& state, const BilinearParams& params, double y, double xi_k);

}  // namespace ttroute
