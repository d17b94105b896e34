#pragma once

// Monomial bases of bounded total degree, in graded lexicographic order.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rbfscale {

/// Exponent tuples of all monomials in `dim` variables with total degree
/// <= `degree`, graded by degree, lexicographic within a degree
/// (2D, degree 2: 1, x, y, x^2, xy, y^2).
inline std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  if (degree < 0) return out;
  std::vector<int> e(dim, 0);
  for (int total = 0; total <= degree; ++total) {
    // enumerate compositions of `total` into dim parts, first variable highest
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == dim - 1) {
        e[var] = remaining;
        out.push_back(e);
        return;
      }
      for (int p = remaining; p >= 0; --p) {
        e[var] = p;
        self(self, var + 1, remaining - p);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

/// Number of monomials of total degree <= degree in dim variables.
inline int monomial_count(int dim, int degree) {
  if (degree < 0) return 0;
  long c = 1;
  for (int i = 1; i <= dim; ++i) c = c * (degree + i) / i;
  return int(c);
}

/// Row vector of monomial values at a point.
inline Eigen::RowVectorXd monomial_row(const std::vector<std::vector<int>>& exps,
                                       const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  Eigen::RowVectorXd row(exps.size());
  // cache powers per coordinate
  std::vector<std::vector<double>> powers(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    int needed = 0;
    for (const auto& e : exps) needed = std::max(needed, e[d]);
    powers[d].resize(needed + 1);
    powers[d][0] = 1.0;
    for (int p = 1; p <= needed; ++p) powers[d][p] = powers[d][p - 1] * x(d);
  }
  for (std::size_t k = 0; k < exps.size(); ++k) {
    double v = 1.0;
    for (Eigen::Index d = 0; d < x.size(); ++d) v *= powers[d][exps[k][d]];
    row(Eigen::Index(k)) = v;
  }
  return row;
}

/// Vandermonde-type matrix: one row per point, one column per monomial.
inline Eigen::MatrixXd vandermonde(const Eigen::MatrixXd& points,
                                   const std::vector<std::vector<int>>& exps) {
  Eigen::MatrixXd v(points.rows(), Eigen::Index(exps.size()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) v.row(i) = monomial_row(exps, points.row(i));
  return v;
}

}  // namespace rbfscale
