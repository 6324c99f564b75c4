#pragma once

#include "proxmcmc/prox.hpp"

#include <stdexcept>
#include <utility>

namespace proxmcmc {

/// Which slice of a flat model state a term reads: the regularized block
/// at [offset, offset+size), optionally followed by the epigraph height.
struct BlockMap {
  Index offset = 0;
  Index size = 0;
  bool includes_alpha = false;
};

/// One Moreau-Yosida smoothed term of a posterior: an indicator of an
/// EpigraphSet, or the l1 penalty itself (prox = soft-thresholding), which
/// exists for testing the envelope against its Huber closed form.
class EnvelopeTerm {
 public:
  EnvelopeTerm(EpigraphSet set, double lambda, BlockMap block = {})
      : set_(std::move(set)), lambda_(lambda), block_(block) {
    if (!(lambda > 0.0)) throw std::domain_error("EnvelopeTerm: lambda must be positive");
  }

  static EnvelopeTerm absolute_value(double lambda, Index dim = 1) {
    EnvelopeTerm t(EpigraphSet::l1_ball(dim), lambda);
    t.abs_penalty_ = true;
    return t;
  }

  bool is_absolute_value() const { return abs_penalty_; }
  const EpigraphSet& set() const { return set_; }
  double lambda() const { return lambda_; }
  const BlockMap& block() const { return block_; }

  /// Flat evaluation point dimension: point_dim (+1 for epigraph kinds).
  Index arg_dim() const {
    if (abs_penalty_) return set_.point_dim();
    return set_.point_dim() + (set_.is_epigraph() ? 1 : 0);
  }

 private:
  EpigraphSet set_;
  double lambda_;
  BlockMap block_;
  bool abs_penalty_ = false;
};

/// Envelope value at x.  For indicator terms this is d^2(x)/(2 lambda) from
/// the projection distance; for the l1 penalty it is
/// g(prox(x)) + ||prox(x) - x||^2 / (2 lambda), the Huber function.
inline double envelope_value(const EnvelopeTerm& term, const VectorXd& x) {
  if (x.size() != term.arg_dim()) throw std::domain_error("envelope_value: dimension mismatch");
  const double lam = term.lambda();
  if (term.is_absolute_value()) {
    VectorXd p = soft_threshold(x, lam);
    return p.lpNorm<1>() + (p - x).squaredNorm() / (2.0 * lam);
  }
  const auto& set = term.set();
  std::optional<double> alpha;
  VectorXd point = x;
  if (set.is_epigraph()) {
    alpha = x(x.size() - 1);
    point = x.head(x.size() - 1);
  }
  auto proj = set.project(point, alpha);
  return proj.distance * proj.distance / (2.0 * lam);
}

/// Envelope gradient (x - prox(x)) / lambda.  Exact for convex sets; for
/// RankLeK it is the subgradient element generated by the deterministic
/// rank projection.
inline VectorXd envelope_gradient(const EnvelopeTerm& term, const VectorXd& x) {
  if (x.size() != term.arg_dim()) throw std::domain_error("envelope_gradient: dimension mismatch");
  const double lam = term.lambda();
  if (term.is_absolute_value()) {
    return (x - soft_threshold(x, lam)) / lam;
  }
  const auto& set = term.set();
  if (set.is_epigraph()) {
    auto proj = set.project(x.head(x.size() - 1), x(x.size() - 1));
    VectorXd g(x.size());
    g.head(x.size() - 1) = (x.head(x.size() - 1) - proj.point) / lam;
    g(x.size() - 1) = (x(x.size() - 1) - *proj.alpha) / lam;
    return g;
  }
  auto proj = set.project(x);
  return (x - proj.point) / lam;
}

}  // namespace proxmcmc
