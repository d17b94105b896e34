#pragma once

// Scaled kernel interpolation: positive definite systems A alpha = y and
// polyharmonic saddle systems [A P; P^T 0][lambda; gamma] = [y; 0].

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kernel.hpp"
#include "point_set.hpp"
#include "polynomial.hpp"

namespace rbfscale {

inline constexpr double kDefaultConditionLimit = 1e14;

enum class SolveStatus { ok, skipped_condition, skipped_singular };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ok: return "ok";
    case SolveStatus::skipped_condition: return "skipped(condition)";
    case SolveStatus::skipped_singular: return "skipped(singular)";
  }
  return "?";
}

struct ConditionGate {
  double estimate = 1.0;
  double limit = kDefaultConditionLimit;
  bool passes() const { return estimate <= limit; }
};

/// Kernel block A_jk = phi(pre_scale * eps * |x_j - x_k|), mirrored so it
/// is symmetric to the last bit. Throws on duplicate sites.
inline Eigen::MatrixXd assemble_kernel_block(const RadialKernel& kernel, double eps,
                                             const PointSet& sites) {
  const double scale = kernel.effective_scale(eps);
  const Eigen::Index n = sites.size();
  Eigen::MatrixXd a(n, n);
  const double diag = kernel(0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(j, j) = diag;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double r = (sites[j] - sites[k]).norm();
      if (r == 0.0)
        throw std::invalid_argument("assemble: duplicate sites " + std::to_string(j) + " and " +
                                    std::to_string(k));
      const double v = kernel(scale * r);
      a(j, k) = v;
      a(k, j) = v;
    }
  }
  return a;
}

/// Full interpolation matrix: the kernel block for positive definite kernels,
/// the saddle matrix with the monomial block for CPD kernels.
inline Eigen::MatrixXd assemble(const RadialKernel& kernel, double eps, const PointSet& sites) {
  Eigen::MatrixXd a = assemble_kernel_block(kernel, eps, sites);
  if (kernel.positive_definite()) return a;
  const auto exps = monomial_exponents(sites.dim(), kernel.tail_degree());
  const Eigen::MatrixXd p = vandermonde(sites.sites(), exps);
  const Eigen::Index n = sites.size(), m = p.cols();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n + m, n + m);
  full.topLeftCorner(n, n) = a;
  full.topRightCorner(n, m) = p;
  full.bottomLeftCorner(m, n) = p.transpose();
  return full;
}

/// 1-norm condition number kappa_1 = |A|_1 |A^{-1}|_1, computed exactly from
/// an LU factorization. Returns +inf for singular matrices.
inline double condition_estimate(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("condition_estimate: matrix not square");
  if (a.rows() == 0) return 1.0;
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (u(i, i) == 0.0) return inf;
  const Eigen::MatrixXd inv = lu.inverse();
  const double norm_a = a.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_inv = inv.cwiseAbs().colwise().sum().maxCoeff();
  const double k = norm_a * norm_inv;
  if (!std::isfinite(k)) return inf;
  return std::max(k, 1.0);
}

/// An assembled and (if the gate passes) factorized interpolation system at a
/// fixed (kernel, eps, sites). One factorization serves coefficient solves,
/// Lagrange bases and power-function quadratic forms.
///
/// Positive definite kernels factor A by Cholesky. CPD kernels use the
/// null-space form: with P = [Q1 Q2] R, lambda = Q2 mu and
/// (Q2^T A Q2) mu = Q2^T y, where (-1)^m Q2^T A Q2 is positive definite for
/// r^{2m-2} log r. The condition gate applies to the matrix that is factored.
class KernelSystem {
 public:
  KernelSystem(RadialKernel kernel, double eps, PointSet sites,
               double cond_limit = kDefaultConditionLimit)
      : kernel_(std::move(kernel)), eps_(eps), sites_(std::move(sites)) {
    if (sites_.empty()) throw std::invalid_argument("interpolation: empty site set");
    if (!kernel_.positive_definite()) {
      if (sites_.size() == 1)
        throw std::invalid_argument("interpolation: CPD kernel needs more than one site");
      tail_exps_ = monomial_exponents(sites_.dim(), kernel_.tail_degree());
    }
    kernel_.effective_scale(eps_);  // validates eps
    matrix_ = assemble(kernel_, eps_, sites_);
    gate_.limit = cond_limit;
    gate_.estimate = std::numeric_limits<double>::infinity();

    if (kernel_.positive_definite()) {
      factor_positive_definite();
    } else {
      factor_null_space();
    }
  }

  const RadialKernel& kernel() const { return kernel_; }
  double eps() const { return eps_; }
  const PointSet& sites() const { return sites_; }
  /// Kernel block, or the full saddle matrix [A P; P^T 0] for CPD kernels.
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  SolveStatus status() const { return status_; }
  bool ok() const { return status_ == SolveStatus::ok; }
  const ConditionGate& gate() const { return gate_; }
  double condition() const { return gate_.estimate; }
  const std::vector<std::vector<int>>& tail_exponents() const { return tail_exps_; }
  Eigen::Index num_sites() const { return sites_.size(); }
  Eigen::Index tail_size() const { return Eigen::Index(tail_exps_.size()); }

  /// b(x)_j = phi_eps(|x - x_j|)
  Eigen::VectorXd kernel_vector(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    const double scale = kernel_.effective_scale(eps_);
    Eigen::VectorXd b(sites_.size());
    for (Eigen::Index j = 0; j < sites_.size(); ++j) b(j) = kernel_(scale * (x - sites_[j]).norm());
    return b;
  }

  /// [b(x); q(x)], the full basis vector including tail monomials.
  Eigen::VectorXd basis_vector(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (tail_exps_.empty()) return kernel_vector(x);
    Eigen::VectorXd v(sites_.size() + tail_size());
    v.head(sites_.size()) = kernel_vector(x);
    v.tail(tail_size()) = monomial_row(tail_exps_, x).transpose();
    return v;
  }

  /// Solves the full system for right-hand sides [Y; 0] (n + tail rows);
  /// returns stacked kernel and tail coefficients.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const {
    require_ok();
    const Eigen::Index n = num_sites(), m = tail_size();
    if (rhs.rows() != n + m) throw std::invalid_argument("solve: right-hand side has wrong size");
    if (m == 0) return llt_.solve(rhs);
    if (rhs.bottomRows(m).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("solve: only homogeneous side conditions are supported");
    const Eigen::MatrixXd y = rhs.topRows(n);
    const Eigen::MatrixXd mu = definite_sign_ * llt_.solve(null_basis_.transpose() * y);
    Eigen::MatrixXd out(n + m, rhs.cols());
    out.topRows(n) = null_basis_ * mu;
    const Eigen::MatrixXd remainder = y - matrix_.topLeftCorner(n, n) * out.topRows(n);
    out.bottomRows(m) = tail_r_.triangularView<Eigen::Upper>().solve(range_basis_.transpose() * remainder);
    return out;
  }

  /// b^T A^{-1} b for the positive definite case, via |L^{-1} b|^2.
  double inverse_quadratic_form(const Eigen::VectorXd& b) const {
    require_ok();
    if (!kernel_.positive_definite())
      throw std::logic_error("inverse_quadratic_form: positive definite kernels only");
    const Eigen::VectorXd w = llt_.matrixL().solve(b);
    return w.squaredNorm();
  }

 private:
  void require_ok() const {
    if (status_ != SolveStatus::ok)
      throw std::logic_error("interpolation system not solvable: " + to_string(status_));
  }

  void factor_positive_definite() {
    gate_.estimate = condition_estimate(matrix_);
    if (!gate_.passes()) {
      status_ = SolveStatus::skipped_condition;
      return;
    }
    llt_.compute(matrix_);
    status_ = llt_.info() == Eigen::Success ? SolveStatus::ok : SolveStatus::skipped_singular;
  }

  void factor_null_space() {
    const Eigen::Index n = num_sites(), m = tail_size();
    const Eigen::MatrixXd p = matrix_.topRightCorner(n, m);
    if (n <= m) {
      status_ = SolveStatus::skipped_singular;
      return;
    }
    {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
      const auto& sv = svd.singularValues();
      if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
        status_ = SolveStatus::skipped_singular;
        return;
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(p);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    range_basis_ = q.leftCols(m);
    null_basis_ = q.rightCols(n - m);
    tail_r_ = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    // (-1)^m Q2^T A Q2 is positive definite for phi = r^{2m-2} log r
    definite_sign_ = (kernel_.cpd_order() % 2 == 0) ? 1.0 : -1.0;
    Eigen::MatrixXd b = definite_sign_ * (null_basis_.transpose() * matrix_.topLeftCorner(n, n) * null_basis_);
    b = 0.5 * (b + b.transpose()).eval();
    gate_.estimate = condition_estimate(b);
    if (!gate_.passes()) {
      status_ = SolveStatus::skipped_condition;
      return;
    }
    llt_.compute(b);
    status_ = llt_.info() == Eigen::Success ? SolveStatus::ok : SolveStatus::skipped_singular;
  }

  RadialKernel kernel_;
  double eps_;
  PointSet sites_;
  std::vector<std::vector<int>> tail_exps_;
  Eigen::MatrixXd matrix_;
  ConditionGate gate_;
  SolveStatus status_ = SolveStatus::skipped_singular;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  // CPD null-space factorization
  Eigen::MatrixXd range_basis_;
  Eigen::MatrixXd null_basis_;
  Eigen::MatrixXd tail_r_;
  double definite_sign_ = 1.0;
};

/// s(x) = sum_j alpha_j phi_eps(|x - x_j|) (+ polynomial tail for CPD kernels).
class Interpolant {
 public:
  Interpolant() = default;

  Interpolant(std::shared_ptr<const KernelSystem> system, Eigen::VectorXd values)
      : system_(std::move(system)), values_(std::move(values)) {
    if (values_.size() != system_->num_sites())
      throw std::invalid_argument("solve: value count does not match site count");
    if (!values_.allFinite()) throw std::invalid_argument("solve: non-finite data value");
    status_ = system_->status();
    if (status_ != SolveStatus::ok) return;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system_->num_sites() + system_->tail_size());
    rhs.head(values_.size()) = values_;
    const Eigen::VectorXd c = system_->solve(rhs);
    coefficients_ = c.head(system_->num_sites());
    tail_ = c.tail(system_->tail_size());
    const Eigen::VectorXd back = system_->matrix() * c - rhs;
    residual_ = back.head(values_.size()).cwiseAbs().maxCoeff();
    side_condition_ = system_->tail_size() ? back.tail(system_->tail_size()).cwiseAbs().maxCoeff() : 0.0;
  }

  SolveStatus status() const { return status_; }
  bool ok() const { return status_ == SolveStatus::ok; }
  const KernelSystem& system() const { return *system_; }
  std::shared_ptr<const KernelSystem> system_ptr() const { return system_; }
  const RadialKernel& kernel() const { return system_->kernel(); }
  double eps() const { return system_->eps(); }
  const PointSet& sites() const { return system_->sites(); }
  const Eigen::VectorXd& values() const { return values_; }
  /// alpha (positive definite) or lambda (CPD)
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  /// gamma, over the graded monomial basis of the system
  const Eigen::VectorXd& tail() const { return tail_; }
  double condition() const { return system_->condition(); }
  /// max_j |s(x_j) - y_j| measured right after the solve
  double residual() const { return residual_; }
  /// max over tail monomials q of |sum_j lambda_j q(x_j)|
  double side_condition() const { return side_condition_; }

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (!ok()) throw std::logic_error("evaluate: interpolant status " + to_string(status_));
    double s = system_->kernel_vector(x).dot(coefficients_);
    if (tail_.size()) s += monomial_row(system_->tail_exponents(), x).dot(tail_);
    return s;
  }

 private:
  std::shared_ptr<const KernelSystem> system_;
  Eigen::VectorXd values_;
  Eigen::VectorXd coefficients_;
  Eigen::VectorXd tail_;
  SolveStatus status_ = SolveStatus::skipped_singular;
  double residual_ = 0.0;
  double side_condition_ = 0.0;
};

inline Interpolant solve(std::shared_ptr<const KernelSystem> system, const Eigen::VectorXd& values) {
  return Interpolant(std::move(system), values);
}

inline Interpolant solve(const RadialKernel& kernel, double eps, const PointSet& sites,
                         const Eigen::VectorXd& values,
                         double cond_limit = kDefaultConditionLimit) {
  return Interpolant(std::make_shared<const KernelSystem>(kernel, eps, sites, cond_limit), values);
}

inline Eigen::VectorXd evaluate(const Interpolant& s, const PointSet& points) {
  Eigen::VectorXd out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out(i) = s(points[i]);
  return out;
}

/// Cardinal functions u_j with u_j(x_i) = delta_ji. Row j of `coefficients()`
/// holds beta_jk (and tail coefficients for CPD kernels), i.e. the inverse of
/// the kernel matrix in the positive definite case.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::shared_ptr<const KernelSystem> system) : system_(std::move(system)) {
    status_ = system_->status();
    if (status_ != SolveStatus::ok) return;
    const Eigen::Index n = system_->num_sites();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + system_->tail_size(), n);
    rhs.topRows(n).setIdentity();
    coefficients_ = system_->solve(rhs).transpose();
  }

  SolveStatus status() const { return status_; }
  bool ok() const { return status_ == SolveStatus::ok; }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  const KernelSystem& system() const { return *system_; }

  /// All u_j(x), j = 1..n.
  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (!ok()) throw std::logic_error("lagrange: basis status " + to_string(status_));
    return coefficients_ * system_->basis_vector(x);
  }

 private:
  std::shared_ptr<const KernelSystem> system_;
  Eigen::MatrixXd coefficients_;
  SolveStatus status_ = SolveStatus::skipped_singular;
};

inline LagrangeBasis lagrange_basis(const RadialKernel& kernel, double eps, const PointSet& sites,
                                    double cond_limit = kDefaultConditionLimit) {
  return LagrangeBasis(std::make_shared<const KernelSystem>(kernel, eps, sites, cond_limit));
}

}  // namespace rbfscale
