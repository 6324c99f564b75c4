#pragma once

#include "proxmcmc/envelope.hpp"
#include "proxmcmc/posterior.hpp"

#include <utility>
#include <vector>

namespace proxmcmc {

/// Entry of an observed-entry list (0-based indices).
struct ObservedEntry {
  Index row;
  Index col;
  double value;
};

/// Low-rank matrix completion: vec Y ~ N(vec X, sigma^2 I) on the observed
/// set Omega, with a flat prior over the nuclear-norm ball smoothed through
/// the epigraph envelope.  State layout: (vec X column-major, log sigma^2,
/// log alpha).
classatrixCompletionModel;

class MatrixCompletionModel : public SmoothedPosterior {
 public:
  MatrixCompletionModel(Index rows, Index cols, const std::vector<ObservedEntry>& observed,
                        InverseGammaPrior sigma2_prior, InverseGammaPrior alpha_prior,
                        double lambda)
      : rows_(rows),
        cols_(cols),
        sigma2_prior_(sigma2_prior),
        alpha_prior_(alpha_prior),
        lambda_(lambda) {
    if (rows_ < 1 || cols_ < 1) throw std::domain_error("MatrixCompletionModel: empty shape");
    if (observed.empty())
      throw std::domain_error("MatrixCompletionModel: observed set must be nonempty");
    if (!(lambda_ > 0.0)) throw std::domain_error("MatrixCompletionModel: lambda must be positive");
    mask_ = MatrixXd::Zero(rows_, cols_);
    y_obs_ = MatrixXd::Zero(rows_, cols_);
    for (const auto& e : observed) {
      if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_)
        throw std::domain_error("MatrixCompletionModel: observed entry out of range");
      mask_(e.row, e.col) = 1.0;
      y_obs_(e.row, e.col) = e.value;
    }
    n_obs_ = static_cast<Index>(observed.size());

    layout_.tau_dim = rows_ * cols_;
    layout_.has_log_sigma2 = true;
    layout_.has_log_alpha = true;
    for (Index j = 0; j < cols_; ++j)
      for (Index i = 0; i < rows_; ++i)
        layout_.names.push_back("X_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    layout_.names.push_back("log_sigma2");
    layout_.names.push_back("log_alpha");
  }

  const BlockLayout& layout() const override { return layout_; }
  double lambda() const override { return lambda_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const MatrixXd& observation_mask() const { return mask_; }
  const MatrixXd& observed_values() const { return y_obs_; }

  double log_density(const VectorXd& state) const override {
    const Index m = rows_ * cols_;
    Eigen::Map<const MatrixXd> x(state.data(), rows_, cols_);
    const double ls2 = state(m);
    const double la = state(m + 1);
    const double sigma2 = std::exp(ls2);
    const double alpha = std::exp(la);
    const double rss = (mask_.array() * (y_obs_ - x).array()).square().sum();
    auto proj = project_nuclear_epigraph(x, alpha);
    double lp = -0.5 * static_cast<double>(n_obs_) * ls2 - rss / (2.0 * sigma2);
    lp += sigma2_prior_.log_density_log_param(ls2);
    lp += alpha_prior_.log_density_log_param(la);
    lp -= proj.distance * proj.distance / (2.0 * lambda_);
    return lp;
  }

  VectorXd gradient(const VectorXd& state) const override {
    const Index m = rows_ * cols_;
    Eigen::Map<const MatrixXd> x(state.data(), rows_, cols_);
    const double ls2 = state(m);
    const double la = state(m + 1);
    const double sigma2 = std::exp(ls2);
    const double alpha = std::exp(la);
    const MatrixXd resid = mask_.array() * (y_obs_ - x).array();
    auto proj = project_nuclear_epigraph(x, alpha);

    VectorXd g(state.size());
    MatrixXd gx = resid / sigma2 - (x - proj.point) / lambda_;
    g.head(m) = Eigen::Map<const VectorXd>(gx.data(), m);
    g(m) = -0.5 * static_cast<double>(n_obs_) + resid.squaredNorm() / (2.0 * sigma2) +
           sigma2_prior_.grad_log_param(ls2);
    g(m + 1) = alpha_prior_.grad_log_param(la) - alpha * (alpha - *proj.alpha) / lambda_;
    return g;
  }

  /// Start at the zero-filled observed matrix with alpha 10% above its
  /// nuclear norm.
  VectorXd initial_state() const override {
    const Index m = rows_ * cols_;
    VectorXd s(dim());
    s.head(m) = Eigen::Map<const VectorXd>(y_obs_.data(), m);
    s(m) = std::log(1e-4);  // observed residual is exactly zero at the start
    Eigen::BDCSVD<MatrixXd> svd(y_obs_);
    s(m + 1) = std::log(std::max(1.1 * svd.singularValues().sum(), 1e-3));
    return s;
  }

 private:
  Index rows_, cols_;
  Index n_obs_ = 0;
  MatrixXd mask_;
  MatrixXd y_obs_;
  InverseGammaPrior sigma2_prior_;
  InverseGammaPrior alpha_prior_;
  double lambda_;
  BlockLayout layout_;
};

}  // namespace proxmcmc
