#pragma once

#include "proxmcmc/envelope.hpp"
#include "proxmcmc/posterior.hpp"

#include <cmath>
#include <utility>

namespace proxmcmc {

/// Gaussian graphical model: precision matrix Theta = L L^T estimated from
/// a sample covariance S (n observations), with a flat prior over the
/// off-diagonal l1 ball sum_{j!=k} |Theta_jk| <= alpha smoothed through the
/// epigraph envelope.
///
/// Unconstrained state: vech(L) in column-major lower-triangle order with
/// the diagonal on the log scale (z_jj = log L_jj, so Theta stays positive
/// definite), then log alpha.  The change of variables
/// (z, off-diagonals) -> vech(Theta) contributes the log-Jacobian
/// p log 2 + sum_j (p - j + 2) z_jj, which is kept in the density (it is
/// verified against a numerical Jacobian determinant in the test suite).
class GraphicalLassoModel : public SmoothedPosterior {
 public:
  GraphicalLassoModel(MatrixXd S, Index n_obs, InverseGammaPrior alpha_prior, double lambda)
      : s_(std::move(S)), n_obs_(n_obs), alpha_prior_(alpha_prior), lambda_(lambda) {
    if (s_.rows() != s_.cols()) throw std::domain_error("GraphicalLassoModel: S must be square");
    if (!(lambda_ > 0.0)) throw std::domain_error("GraphicalLassoModel: lambda must be positive");
    if ((s_ - s_.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, s_.cwiseAbs().maxCoeff()))
      throw std::domain_error("GraphicalLassoModel: S must be symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8 * std::max(1.0, es.eigenvalues().maxCoeff()))
      throw std::domain_error("GraphicalLassoModel: S must be positive semidefinite");

    const Index p = s_.rows();
    layout_.tau_dim = p * (p + 1) / 2;
    layout_.has_log_sigma2 = false;
    layout_.has_log_alpha = true;
    for (Index j = 0; j < p; ++j)
      for (Index i = j; i < p; ++i)
        layout_.names.push_back(i == j
                                    ? "log_L_" + std::to_string(j + 1) + "_" + std::to_string(j + 1)
                                    : "L_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    layout_.names.push_back("log_alpha");
  }

  const BlockLayout& layout() const override { return layout_; }
  double lambda() const override { return lambda_; }
  Index size() const { return s_.rows(); }
  Index n_obs() const { return n_obs_; }

  MatrixXd cholesky_from_state(const VectorXd& state) const {
    const Index p = s_.rows();
    MatrixXd L = MatrixXd::Zero(p, p);
    Index idx = 0;
    for (Index j = 0; j < p; ++j)
      for (Index i = j; i < p; ++i, ++idx) L(i, j) = (i == j) ? std::exp(state(idx)) : state(idx);
    return L;
  }

  double log_density(const VectorXd& state) const override {
    const Index p = s_.rows();
    const double la = state(layout_.log_alpha_index());
    const double alpha = std::exp(la);
    const MatrixXd L = cholesky_from_state(state);
    const MatrixXd theta = L * L.transpose();
    const double n = static_cast<double>(n_obs_);

    double zdiag_sum = 0.0, jacobian = p * std::log(2.0);
    for (Index j = 0; j < p; ++j) {
      const double z = std::log(L(j, j));
      zdiag_sum += z;
      jacobian += static_cast<double>(p - j + 1) * z;  // p - (j+1) + 2 with 1-based j
    }

    auto proj = project_offdiag_epigraph(theta, alpha);
    double lp = -0.5 * n * (s_.array() * theta.array()).sum() + n * zdiag_sum;
    lp += alpha_prior_.log_density_log_param(la);
    lp -= proj.dist2 / (2.0 * lambda_);
    lp += jacobian;
    return lp;
  }

  VectorXd gradient(const VectorXd& state) const override {
    const Index p = s_.rows();
    const double la = state(layout_.log_alpha_index());
    const double alpha = std::exp(la);
    const MatrixXd L = cholesky_from_state(state);
    const MatrixXd theta = L * L.transpose();
    const double n = static_cast<double>(n_obs_);

    auto proj = project_offdiag_epigraph(theta, alpha);
    // Residual Theta - P is symmetric with zero diagonal.
    const MatrixXd grad_L = -n * (s_ * L) - (2.0 / lambda_) * (proj.residual * L);

    VectorXd g(state.size());
    Index idx = 0;
    for (Index j = 0; j < p; ++j)
      for (Index i = j; i < p; ++i, ++idx) {
        if (i == j)
          g(idx) = grad_L(j, j) * L(j, j) + n + static_cast<double>(p - j + 1);
        else
          g(idx) = grad_L(i, j);
      }
    g(layout_.log_alpha_index()) =
        alpha_prior_.grad_log_param(la) - alpha * (alpha - proj.alpha) / lambda_;
    return g;
  }

  /// Start at the Cholesky factor of (S + 0.1 I)^-1 with alpha 10% above
  /// the off-diagonal l1 norm of the implied precision matrix.
  VectorXd initial_state() const override {
    const Index p = s_.rows();
    MatrixXd reg = s_;
    reg.diagonal().array() += 0.1;
    const MatrixXd theta0 = reg.llt().solve(MatrixXd::Identity(p, p));
    const MatrixXd L0 = theta0.llt().matrixL();
    VectorXd s(dim());
    Index idx = 0;
    double offdiag_l1 = 0.0;
    for (Index j = 0; j < p; ++j)
      for (Index i = j; i < p; ++i, ++idx) s(idx) = (i == j) ? std::log(L0(j, j)) : L0(i, j);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < p; ++i)
        if (i != j) offdiag_l1 += std::abs(theta0(i, j));
    s(layout_.log_alpha_index()) = std::log(std::max(1.1 * offdiag_l1, 1e-3));
    return s;
  }

 private:
  struct OffdiagProjection {
    MatrixXd residual;  // Theta - P, zero diagonal
    double alpha;       // projected epigraph height
    double dist2;
  };

  // Epigraph projection of (offdiag(Theta), alpha) onto
  // {(v, a): ||v||_1 <= a}; the diagonal is unconstrained.
  OffdiagProjection project_offdiag_epigraph(const MatrixXd& theta, double alpha) const {
    const Index p = theta.rows();
    VectorXd od(p * (p - 1));
    Index k = 0;
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < p; ++i)
        if (i != j) od(k++) = theta(i, j);
    auto proj = project_l1_epigraph(od, alpha);
    MatrixXd residual = MatrixXd::Zero(p, p);
    k = 0;
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < p; ++i)
        if (i != j) {
          residual(i, j) = od(k) - proj.point(k);
          ++k;
        }
    return {std::move(residual), *proj.alpha, proj.distance * proj.distance};
  }

  MatrixXd s_;
  Index n_obs_;
  InverseGammaPrior alpha_prior_;
  double lambda_;
  BlockLayout layout_;
};

}  // namespace proxmcmc
