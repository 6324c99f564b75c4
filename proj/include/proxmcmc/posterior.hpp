#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxmcmc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Inverse-Gamma(scale r, shape s): density proportional to
/// v^-(s+1) exp(-r/v).  Contribution to the log-density in the log-v
/// parameterization (Jacobian absorbed) is -s log v - r/v plus a constant.
struct InverseGammaPrior {
  double scale;  // r
  double shape;  // s

  InverseGammaPrior(double r, double s) : scale(r), shape(s) {
    if (!(r > 0.0) || !(s > 0.0))
      throw std::domain_error("InverseGammaPrior: scale and shape must be positive");
  }

  double log_density_log_param(double log_v) const {
    return -shape * log_v - scale * std::exp(-log_v);
  }

  double grad_log_param(double log_v) const { return -shape + scale * std::exp(-log_v); }
};

/// Named-block layout of a flat parameter vector: the regularized block tau
/// first, then log sigma^2 and log alpha when the model has them.
struct BlockLayout {
  Index tau_dim = 0;
  bool has_log_sigma2 = false;
  bool has_log_alpha = false;
  std::vector<std::string> names;

  Index dim() const {
    return tau_dim + (has_log_sigma2 ? 1 : 0) + (has_log_alpha ? 1 : 0);
  }
  Index log_sigma2_index() const { return tau_dim; }
  Index log_alpha_index() const { return tau_dim + (has_log_sigma2 ? 1 : 0); }
};

/// A smoothed posterior in an unconstrained parameterization: unnormalized
/// log-density and its gradient, with the envelope scale lambda fixed at
/// construction.  Implementations are immutable and safe for concurrent
/// evaluation.
class SmoothedPosterior {
 public:
  virtual ~SmoothedPosterior() = default;

  virtual const BlockLayout& layout() const = 0;
  virtual double lambda() const = 0;
  virtual double log_density(const VectorXd& state) const = 0;
  virtual VectorXd gradient(const VectorXd& state) const = 0;
  /// Model-specific default starting point (feasible by construction).
  virtual VectorXd initial_state() const = 0;

  Index dim() const { return layout().dim(); }
};

}  // namespace proxmcmc
