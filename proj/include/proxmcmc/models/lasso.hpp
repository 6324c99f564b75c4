#pragma once

#include "proxmcmc/envelope.hpp"
#include "proxmcmc/posterior.hpp"

#include <utility>

namespace proxmcmc {

/// Gaussian linear model y ~ N(X beta, sigma^2 I) with a flat prior over
/// the l1 ball ||beta||_1 <= alpha, smoothed through the epigraph envelope,
/// and Inverse-Gamma priors on sigma^2 and alpha.  State layout:
/// (beta, log sigma^2, log alpha).  Dropped constants: the Gaussian
/// -n/2 log(2 pi), both Inverse-Gamma normalizers, and the epigraph volume
/// factor (absorbed into the alpha prior shape).
class LassoModel : public SmoothedPosterior {
 public:
  LassoModel(MatrixXd X, VectorXd y, InverseGammaPrior sigma2_prior,
             InverseGammaPrior alpha_prior, double lambda)
      : x_(std::move(X)),
        y_(std::move(y)),
        sigma2_prior_(sigma2_prior),
        alpha_prior_(alpha_prior),
        lambda_(lambda) {
    if (x_.rows() != y_.size()) throw std::domain_error("LassoModel: X rows must match y size");
    if (!(lambda_ > 0.0)) throw std::domain_error("LassoModel: lambda must be positive");
    layout_.tau_dim = x_.cols();
    layout_.has_log_sigma2 = true;
    layout_.has_log_alpha = true;
    for (Index j = 0; j < x_.cols(); ++j)
      layout_.names.push_back("beta_" + std::to_string(j + 1));
    layout_.names.push_back("log_sigma2");
    layout_.names.push_back("log_alpha");
  }

  const BlockLayout& layout() const override { return layout_; }
  double lambda() const override { return lambda_; }

  double log_density(const VectorXd& state) const override {
    const Index p = x_.cols();
    const auto beta = state.head(p);
    const double ls2 = state(p);
    const double la = state(p + 1);
    const double sigma2 = std::exp(ls2);
    const double alpha = std::exp(la);
    const double rss = (y_ - x_ * beta).squaredNorm();
    auto proj = project_l1_epigraph(beta, alpha);
    double lp = -0.5 * static_cast<double>(x_.rows()) * ls2 - rss / (2.0 * sigma2);
    lp += sigma2_prior_.log_density_log_param(ls2);
    lp += alpha_prior_.log_density_log_param(la);
    lp -= proj.distance * proj.distance / (2.0 * lambda_);
    return lp;
  }

  VectorXd gradient(const VectorXd& state) const override {
    const Index p = x_.cols();
    const auto beta = state.head(p);
    const double ls2 = state(p);
    const double la = state(p + 1);
    const double sigma2 = std::exp(ls2);
    const double alpha = std::exp(la);
    const VectorXd resid = y_ - x_ * beta;
    auto proj = project_l1_epigraph(beta, alpha);

    VectorXd g(state.size());
    g.head(p) = x_.transpose() * resid / sigma2 - (beta - proj.point) / lambda_;
    g(p) = -0.5 * static_cast<double>(x_.rows()) + resid.squaredNorm() / (2.0 * sigma2) +
           sigma2_prior_.grad_log_param(ls2);
    g(p + 1) = alpha_prior_.grad_log_param(la) - alpha * (alpha - *proj.alpha) / lambda_;
    return g;
  }

  /// Least-squares start (ridge fallback when X'X is singular); alpha
  /// begins 10% above ||beta0||_1 so the chain starts feasible.
  VectorXd initial_state() const override {
    VectorXd beta0 = least_squares_init();
    VectorXd s(dim());
    s.head(x_.cols()) = beta0;
    const double mse = (y_ - x_ * beta0).squaredNorm() / static_cast<double>(x_.rows());
    s(x_.cols()) = std::log(std::max(mse, 1e-8));
    s(x_.cols() + 1) = std::log(std::max(1.1 * beta0.lpNorm<1>(), 1e-3));
    return s;
  }

  const MatrixXd& design() const { return x_; }
  const VectorXd& response() const { return y_; }

 protected:
  VectorXd least_squares_init() const {
    MatrixXd gram = x_.transpose() * x_;
    Eigen::LDLT<MatrixXd> ldlt(gram);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      VectorXd b = ldlt.solve(x_.transpose() * y_);
      if (((gram * b) - x_.transpose() * y_).norm() <= 1e-8 * std::max(1.0, y_.norm()))
        return b;
    }
    gram.diagonal().array() += 1e-3 * std::max(1.0, gram.diagonal().mean());
    return gram.ldlt().solve(x_.transpose() * y_);
  }

  MatrixXd x_;
  VectorXd y_;
  InverseGammaPrior sigma2_prior_;
  InverseGammaPrior alpha_prior_;
  double lambda_;
  BlockLayout layout_;
};

}  // namespace proxmcmc
