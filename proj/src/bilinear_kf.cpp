#include "ttroute/bilinear_kf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ttroute {

void BilinearParams::validate() const {
  if (r < 2) throw std::invalid_argument("regression order must be at least 2");
  const auto n = static_cast<std::size_t>(r);
  if (phi.size() != n || b.size() != n || c.rows() != r || c.cols() != r) {
    throw std::invalid_argument("bilinear coefficients must all have order " + std::to_string(r));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(phi[i]) || !std::isfinite(b[i])) throw std::invalid_argument("non-finite coefficient");
  }
  if (!c.allFinite() || !std::isfinite(mu)) throw std::invalid_argument("non-finite coefficient");
  if (!(q_scale >= 0.0) || !(r_scale >= 0.0)) throw std::invalid_argument("noise scales must be >= 0");
}

BilinearParams BilinearParams::draw(int r, std::mt19937_64& rng, double phi_value, double coef_mean,
                                    double coef_variance) {
  if (r < 2) throw std::invalid_argument("regression order must be at least 2");
  std::normal_distribution<double> coef(coef_mean, std::sqrt(coef_variance));
  BilinearParams p;
  p.r = r;
  p.phi.assign(r, phi_value);
  p.b.resize(r);
  for (double& v : p.b) v = coef(rng);
  p.c.resize(r, r);
  for (int l = 0; l < r; ++l) {
    for (int i = 0; i < r; ++i) p.c(l, i) = coef(rng);
  }
  return p;
}

BilinearKfState BilinearKfState::from_histories(std::span<const double> xi_history,
                                                std::span<const double> x_history, double p_xi, double p_x) {
  if (xi_history.size() != x_history.size() || xi_history.size() < 2) {
    throw std::invalid_argument("histories must have equal length >= 2");
  }
  const auto r = static_cast<Eigen::Index>(xi_history.size());
  BilinearKfState st;
  st.s.resize(2 * r + 1);
  st.s(0) = 1.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    st.s(1 + i) = xi_history[i];
    st.s(1 + r + i) = x_history[i];
  }
  st.P = Eigen::MatrixXd::Zero(2 * r + 1, 2 * r + 1);
  for (Eigen::Index i = 0; i < r; ++i) {
    st.P(1 + i, 1 + i) = p_xi;
    st.P(1 + r + i, 1 + r + i) = p_x;
  }
  st.xi_history.assign(xi_history.begin(), xi_history.end());
  st.x_history.assign(x_history.begin(), x_history.end());
  return st;
}

std::vector<double> psi_terms(const BilinearParams& params, std::span<const double> x_history) {
  const int r = params.r;
  if (static_cast<int>(x_history.size()) != r) throw std::invalid_argument("X history length must equal r");
  // X(k-i) is x_history[r - i]
  std::vector<double> psi(r);
  for (int l = 1; l <= r; ++l) {
    double v = params.b[l - 1];
    for (int i = 1; i <= l; ++i) v += params.c(l - 1, i - 1) * x_history[r - i];
    psi[l - 1] = v;
  }
  return psi;
}

Eigen::MatrixXd build_F(const BilinearParams& params, std::span<const double> x_history,
                        std::span<const double> xi_history) {
  params.validate();
  const int r = params.r;
  if (static_cast<int>(xi_history.size()) != r) throw std::invalid_argument("xi history length must equal r");
  const std::vector<double> psi = psi_terms(params, x_history);

  const int n = params.dim();
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
  F(0, 0) = 1.0;
  // xi window shift; row r (newest xi) is filled by V
  for (int i = 1; i < r; ++i) F(i, i + 1) = 1.0;
  // X window shift; row 2r is the model row
  for (int i = r + 1; i < 2 * r; ++i) F(i, i + 1) = 1.0;

  const int last = 2 * r;
  F(last, 0) = params.mu;
  for (int l = 1; l <= r; ++l) {
    F(last, 1 + (r - l)) = psi[l - 1];                 // psi_l pairs with xi(k-l+1)
    F(last, 1 + r + (r - l)) = -params.phi[l - 1];     // phi_l pairs with X(k-l+1)
  }
  return F;
}

Eigen::VectorXd innovation_input(int r) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * r + 1);
  v(r) = 1.0;
  v(2 * r) = 1.0;
  return v;
}

Eigen::RowVectorXd observation_row(int r) {
  Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(2 * r + 1);
  h(2 * r) = 1.0;
  return h;
}

BilinearStep bilinear_kf_step(const BilinearKfState& state, const BilinearParams& params, double y, double xi_k) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("observed travel time must be positive");
  const int r = params.r;
  const int n = params.dim();
  if (state.s.size() != n || state.P.rows() != n || state.P.cols() != n) {
    throw std::invalid_argument("state dimension must be 2r+1 = " + std::to_string(n));
  }

  const Eigen::MatrixXd F = build_F(params, state.x_history, state.xi_history);
  const Eigen::VectorXd V = innovation_input(r);
  const int last = 2 * r;

  BilinearStep out;
  // E[omega] = 0, so the G term drops out of the predicted mean.
  out.prior = F * state.s + V * xi_k;
  const Eigen::MatrixXd P_prior = F * state.P * F.transpose() + params.q_scale * (V * V.transpose());

  const double innovation_variance = P_prior(last, last) + params.r_scale;
  out.gain = innovation_variance > 0.0 ? Eigen::VectorXd(P_prior.col(last) / innovation_variance)
                                       : Eigen::VectorXd::Zero(n);
  out.residual = y - out.prior(last);

  BilinearKfState& post = out.state;
  post.s = out.prior + out.gain * out.residual;
  Eigen::MatrixXd I_KH = Eigen::MatrixXd::Identity(n, n);
  I_KH.col(last) -= out.gain;
  post.P = I_KH * P_prior;
  post.P = 0.5 * (post.P + post.P.transpose());

  post.xi_history.resize(r);
  post.x_history.resize(r);
  for (int i = 0; i < r; ++i) {
    post.xi_history[i] = post.s(1 + i);
    post.x_history[i] = post.s(1 + r + i);
  }

  out.x_hat = post.s(last);
  return out;
}

}  // namespace ttroute
