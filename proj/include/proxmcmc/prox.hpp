#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

namespace proxmcmc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Shared numerical tolerances.
inline constexpr double kTolRoot = 1e-10;     // |phi| stopping tolerance for bisection
inline constexpr double kTolBracket = 1e-12;  // absolute bracket width for bisection
inline constexpr double kTolSet = 1e-8;       // set-membership tolerance for projections

/// Result of a Euclidean projection.  `alpha` is the projected epigraph
/// height and is set only for epigraph sets; `distance` is always the norm
/// of (input - projection), including the alpha displacement when present.
template <class Point>
struct ProjectionResult {
  Point point;
  std::optional<double> alpha;
  double distance = 0.0;
};

inline double soft_threshold(double x, double lambda) {
  if (lambda < 0.0) throw std::domain_error("soft_threshold: lambda must be nonnegative");
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

inline VectorXd soft_threshold(const VectorXd& x, double lambda) {
  if (lambda < 0.0) throw std::domain_error("soft_threshold: lambda must be nonnegative");
  return x.unaryExpr([lambda](double v) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
  });
}

inline MatrixXd soft_threshold(const MatrixXd& x, double lambda) {
  if (lambda < 0.0) throw std::domain_error("soft_threshold: lambda must be nonnegative");
  return x.unaryExpr([lambda](double v) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
  });
}

/// Positive root of a nonincreasing scalar function with phi(0+) > 0.
/// The bracket grows geometrically from hi_init until phi(hi) <= 0, then
/// bisection runs until |phi| <= kTolRoot or the bracket is below
/// kTolBracket.
template <class Phi>
double find_epigraph_root(Phi&& phi, double hi_init) {
  if (!(hi_init > 0.0)) throw std::domain_error("find_epigraph_root: hi_init must be positive");
  double hi = hi_init;
  int doublings = 0;
  while (phi(hi) > 0.0) {
    hi *= 2.0;
    if (++doublings > 200)
      throw std::runtime_error("find_epigraph_root: no sign change after 200 doublings");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = phi(mid);
    if (std::abs(f) <= kTolRoot) return mid;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= kTolBracket) break;
  }
  return 0.5 * (lo + hi);
}

/// Projection onto the l1-norm epigraph {(b, a): ||b||_1 <= a}.  Infeasible
/// inputs (including a <= 0) are soft-thresholded at the root of
/// phi(t) = ||S_t(b)||_1 - t - a and the height is lifted to a + t*.
inline ProjectionResult<VectorXd> project_l1_epigraph(const VectorXd& beta, double alpha) {
  if (!beta.allFinite() || !std::isfinite(alpha))
    throw std::domain_error("project_l1_epigraph: non-finite input");
  const double l1 = beta.lpNorm<1>();
  if (l1 <= alpha) return {beta, alpha, 0.0};
  auto phi = [&](double t) { return soft_threshold(beta, t).lpNorm<1>() - t - alpha; };
  const double root = find_epigraph_root(phi, std::max(l1 - alpha, 1.0));
  VectorXd point = soft_threshold(beta, root);
  const double d = std::sqrt((beta - point).squaredNorm() + root * root);
  return {std::move(point), alpha + root, d};
}

/// Projection onto the nuclear-norm epigraph {(X, a): sum sigma_i(X) <= a}:
/// singular-value soft-thresholding at the root of the same scalar equation.
inline ProjectionResult<MatrixXd> project_nuclear_epigraph(const MatrixXd& X, double alpha) {
  if (!X.allFinite() || !std::isfinite(alpha))
    throw std::domain_error("project_nuclear_epigraph: non-finite input");
  Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("project_nuclear_epigraph: SVD failed");
  const VectorXd& sigma = svd.singularValues();
  if (sigma.sum() <= alpha) return {X, alpha, 0.0};
  auto phi = [&](double t) { return soft_threshold(sigma, t).sum() - t - alpha; };
  const double root = find_epigraph_root(phi, std::max(sigma.sum() - alpha, 1.0));
  VectorXd s = soft_threshold(sigma, root);
  MatrixXd point = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  const double d = std::sqrt((sigma - s).squaredNorm() + root * root);
  return {std::move(point), alpha + root, d};
}

/// Truncated-SVD projection onto {B: rank(B) <= k}.  When sigma_k ties
/// sigma_{k+1} the projection set is not a singleton; the element produced
/// by the deterministic SVD ordering is returned.
inline MatrixXd project_rank_le_k(const MatrixXd& B, int k) {
  const Index maxrank = std::min(B.rows(), B.cols());
  if (k < 1 || k > maxrank) throw std::domain_error("project_rank_le_k: k out of range");
  if (k == maxrank) return B;
  Eigen::BDCSVD<MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("project_rank_le_k: SVD failed");
  VectorXd s = svd.singularValues();
  s.tail(maxrank - k).setZero();
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

/// Affine constraint set {b: A b = rhs} with A full row rank.  The Gram
/// factor of A A^T is computed once and reused on every projection.
class Hyperplane {
 public:
  Hyperplane(MatrixXd A, VectorXd b) : a_(std::move(A)), b_(std::move(b)) {
    if (a_.rows() != b_.size()) throw std::domain_error("Hyperplane: A rows must match b size");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a_.transpose());
    if (qr.rank() < a_.rows()) throw std::domain_error("Hyperplane: A must have full row rank");
    gram_llt_.compute(a_ * a_.transpose());
    if (gram_llt_.info() != Eigen::Success)
      throw std::domain_error("Hyperplane: Cholesky of A A^T failed");
  }

  const MatrixXd& A() const { return a_; }
  const VectorXd& b() const { return b_; }

  VectorXd project(const VectorXd& beta) const {
    if (beta.size() != a_.cols()) throw std::domain_error("Hyperplane: dimension mismatch");
    return beta - a_.transpose() * gram_llt_.solve(a_ * beta - b_);
  }

 private:
  MatrixXd a_;
  VectorXd b_;
  Eigen::LLT<MatrixXd> gram_llt_;
};

inline VectorXd project_hyperplane(const VectorXd& beta, const MatrixXd& A, const VectorXd& b) {
  return Hyperplane(A, b).project(beta);
}

enum class SetKind { L1Ball, NuclearBall, Hyperplane, RankLeK };

/// Descriptor of a constraint or epigraph set together with its projection
/// rule.  Epigraph kinds (L1Ball, NuclearBall) carry an extra height
/// coordinate; Hyperplane and RankLeK are plain constraint sets.  Instances
/// are immutable after construction and safe to share across threads.
class EpigraphSet {
 public:
  static EpigraphSet l1_ball(Index dim) {
    EpigraphSet s;
    s.kind_ = SetKind::L1Ball;
    s.rows_ = dim;
    s.cols_ = 1;
    return s;
  }

  static EpigraphSet nuclear_ball(Index rows, Index cols) {
    EpigraphSet s;
    s.kind_ = SetKind::NuclearBall;
    s.rows_ = rows;
    s.cols_ = cols;
    return s;
  }

  static EpigraphSet hyperplane(MatrixXd A, VectorXd b) {
    EpigraphSet s;
    s.kind_ = SetKind::Hyperplane;
    s.rows_ = A.cols();
    s.cols_ = 1;
    s.hyperplane_ = std::make_shared<const Hyperplane>(std::move(A), std::move(b));
    return s;
  }

  static EpigraphSet rank_le_k(Index rows, Index cols, int k) {
    if (k < 1 || k > std::min(rows, cols))
      throw std::domain_error("EpigraphSet: rank bound out of range");
    EpigraphSet s;
    s.kind_ = SetKind::RankLeK;
    s.rows_ = rows;
    s.cols_ = cols;
    s.k_ = k;
    return s;
  }

  SetKind kind() const { return kind_; }
  bool is_epigraph() const { return kind_ == SetKind::L1Ball || kind_ == SetKind::NuclearBall; }
  bool is_convex() const { return kind_ != SetKind::RankLeK; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int rank_bound() const { return k_; }
  Index point_dim() const { return rows_ * cols_; }
  const Hyperplane& hyperplane() const { return *hyperplane_; }

  /// Project a flattened point (column-major for matrix kinds).  `alpha`
  /// must be supplied exactly for epigraph kinds.
  ProjectionResult<VectorXd> project(const VectorXd& x, std::optional<double> alpha = {}) const {
    if (x.size() != point_dim()) throw std::domain_error("EpigraphSet: dimension mismatch");
    if (is_epigraph() != alpha.has_value())
      throw std::invalid_argument("EpigraphSet: alpha required iff the set is an epigraph");
    switch (kind_) {
      case SetKind::L1Ball:
        return project_l1_epigraph(x, *alpha);
      case SetKind::NuclearBall: {
        Eigen::Map<const MatrixXd> m(x.data(), rows_, cols_);
        auto r = project_nuclear_epigraph(m, *alpha);
        VectorXd flat = Eigen::Map<const VectorXd>(r.point.data(), r.point.size());
        return {std::move(flat), r.alpha, r.distance};
      }
      case SetKind::Hyperplane: {
        VectorXd p = hyperplane_->project(x);
        double d = (x - p).norm();
        return {std::move(p), std::nullopt, d};
      }
      case SetKind::RankLeK: {
        Eigen::Map<const MatrixXd> m(x.data(), rows_, cols_);
        MatrixXd p = project_rank_le_k(m, k_);
        VectorXd flat = Eigen::Map<const VectorXd>(p.data(), p.size());
        double d = (x - flat).norm();
        return {std::move(flat), std::nullopt, d};
      }
    }
    throw std::logic_error("EpigraphSet: unreachable");
  }

 private:
  EpigraphSet() = default;
  SetKind kind_ = SetKind::L1Ball;
  Index rows_ = 0;
  Index cols_ = 0;
  int k_ = 0;
  std::shared_ptr<const Hyperplane> hyperplane_;
};

}  // namespace proxmcmc
