#pragma once

// The two scale-free baselines: brute-force least-squares polynomials via a
// truncated pseudoinverse of the Vandermonde matrix, and polyharmonic
// interpolants with polynomial tail.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "interpolation.hpp"
#include "norms.hpp"
#include "point_set.hpp"
#include "polynomial.hpp"

namespace rbfscale {

inline constexpr int kMaxPolynomialDegree = 20;
inline constexpr double kPseudoinverseCutoff = 1e-12;

/// Largest total degree whose 2D monomial count fits the number of sites,
/// capped at kMaxPolynomialDegree.
inline int default_max_degree(Eigen::Index n_sites, int dim = 2) {
  int deg = 0;
  while (monomial_count(dim, deg + 1) <= n_sites && deg + 1 <= kMaxPolynomialDegree) ++deg;
  return deg;
}

struct PolynomialFit {
  int degree = 0;
  std::vector<std::vector<int>> exponents;
  Eigen::VectorXd coefficients;
  /// l_inf error of the chosen fit on the evaluation grid
  double error = 0.0;
  /// l_inf error for every degree 0..max_degree
  std::vector<double> errors_by_degree;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return monomial_row(exponents, x).dot(coefficients);
  }
};

/// Least-squares coefficients over the given monomials via an SVD
/// pseudoinverse that drops singular values below cutoff * sigma_max.
inline Eigen::VectorXd least_squares_pinv(const Eigen::MatrixXd& v, const Eigen::VectorXd& y,
                                          double cutoff) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(cutoff);
  return svd.solve(y);
}

/// Fits every degree 0..max_degree and keeps the one with minimal l_inf
/// error on `eval_points` against `eval_truth`. Ties, up to rounding, go to the
/// lower degree.
/// max_degree < 0 selects default_max_degree.
inline PolynomialFit fit_polynomial(const PointSet& sites, const Eigen::VectorXd& values,
                                    const PointSet& eval_points, const Eigen::VectorXd& eval_truth,
                                    int max_degree = -1, double cutoff = kPseudoinverseCutoff) {
  if (values.size() != sites.size() || eval_truth.size() != eval_points.size())
    throw std::invalid_argument("fit_polynomial: size mismatch");
  if (max_degree < 0) max_degree = default_max_degree(sites.size(), sites.dim());
  if (monomial_count(sites.dim(), max_degree) > sites.size())
    throw std::invalid_argument("fit_polynomial: more monomials than sites");

  std::vector<double> errors;
  std::vector<Eigen::VectorXd> coeffs;
  for (int deg = 0; deg <= max_degree; ++deg) {
    const auto exps = monomial_exponents(sites.dim(), deg);
    coeffs.push_back(least_squares_pinv(vandermonde(sites.sites(), exps), values, cutoff));
    const Eigen::VectorXd fitted = vandermonde(eval_points.sites(), exps) * coeffs.back();
    errors.push_back(eval_points.size() ? (fitted - eval_truth).cwiseAbs().maxCoeff() : 0.0);
  }
  // errors that differ only by rounding count as ties
  const double floor_err = *std::min_element(errors.begin(), errors.end());
  const double scale = eval_truth.size() ? std::max(1.0, eval_truth.cwiseAbs().maxCoeff()) : 1.0;
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  PolynomialFit best;
  for (int deg = 0; deg <= max_degree; ++deg) {
    if (errors[std::size_t(deg)] <= floor_err + tie) {
      best.degree = deg;
      best.exponents = monomial_exponents(sites.dim(), deg);
      best.coefficients = coeffs[std::size_t(deg)];
      best.error = errors[std::size_t(deg)];
      break;
    }
  }
  best.errors_by_degree = std::move(errors);
  return best;
}

struct BaselineResult {
  SolveStatus status = SolveStatus::ok;
  double error = std::numeric_limits<double>::quiet_NaN();
  double native_norm = std::numeric_limits<double>::quiet_NaN();
  double cond_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// l_inf error of the ph3/ph4 interpolant on the evaluation grid. The
/// kernel is scale free, so `eps` is passed through untouched.
inline BaselineResult polyharmonic_baseline(const RadialKernel& kernel, const PointSet& sites,
                                            const Eigen::VectorXd& values, const PointSet& eval_points,
                                            const Eigen::VectorXd& eval_truth, double eps = 1.0,
                                            double cond_limit = kDefaultConditionLimit) {
  if (kernel.family() != KernelFamily::polyharmonic)
    throw std::invalid_argument("polyharmonic_baseline: kernel " + kernel.name() + " is not polyharmonic");
  BaselineResult out;
  const Interpolant s = solve(kernel, eps, sites, values, cond_limit);
  out.status = s.status();
  out.cond_estimate = s.condition();
  if (!s.ok()) return out;
  out.error = (evaluate(s, eval_points) - eval_truth).cwiseAbs().maxCoeff();
  out.native_norm = native_norm_of_interpolant(s);
  return out;
}

}  // namespace rbfscale
