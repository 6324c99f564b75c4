#pragma once

#include "proxmcmc/models/lasso.hpp"

namespace proxmcmc {

/// Lasso with an additional affine constraint A beta = b smoothed through
/// the hyperplane-indicator envelope (same lambda as the l1 term).
class ConstrainedLassoModel : public LassoModel {
 public:
  ConstrainedLassoModel(MatrixXd X, VectorXd y, MatrixXd A, VectorXd b,
                        InverseGammaPrior sigma2_prior, InverseGammaPrior alpha_prior,
                        double lambda)
      : LassoModel(std::move(X), std::move(y), sigma2_prior, alpha_prior, lambda),
        plane_(std::move(A), std::move(b)) {
    if (plane_.A().cols() != x_.cols())
      throw std::domain_error("ConstrainedLassoModel: A cols must match X cols");
  }

  double log_density(const VectorXd& state) const override {
    const auto beta = state.head(x_.cols());
    const VectorXd d = beta - plane_.project(beta);
    return LassoModel::log_density(state) - d.squaredNorm() / (2.0 * lambda_);
  }

  VectorXd gradient(const VectorXd& state) const override {
    VectorXd g = LassoModel::gradient(state);
    const auto beta = state.head(x_.cols());
    g.head(x_.cols()) -= (beta - plane_.project(beta)) / lambda_;
    return g;
  }

  /// Least-squares start projected onto the constraint plane.
  VectorXd initial_state() const override {
    VectorXd beta0 = plane_.project(least_squares_init());
    VectorXd s(dim());
    s.head(x_.cols()) = beta0;
    const double mse = (y_ - x_ * beta0).squaredNorm() / static_cast<double>(x_.rows());
    s(x_.cols()) = std::log(std::max(mse, 1e-8));
    s(x_.cols() + 1) = std::log(std::max(1.1 * beta0.lpNorm<1>(), 1e-3));
    return s;
  }

  const Hyperplane& constraint() const { return plane_; }

 private:
  Hyperplane plane_;
};

}  // namespace proxmcmc
