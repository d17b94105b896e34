#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbfscale {

/// Ordered list of sites in R^d, one site per row.
class PointSet {
 public:
  PointSet() = default;

  explicit PointSet(Eigen::MatrixXd sites, std::string tag = "explicit")
      : sites_(std::move(sites)), tag_(std::move(tag)) {}

  /// 1D convenience constructor.
  static PointSet on_line(const std::vector<double>& xs) {
    Eigen::MatrixXd s(xs.size(), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) s(Eigen::Index(i), 0) = xs[i];
    return PointSet(std::move(s));
  }

  /// Regular k x k grid on [-1,1]^2 including the boundary.
  static PointSet regular_grid(int k) {
    if (k < 2) throw std::invalid_argument("regular_grid: need k >= 2");
    Eigen::MatrixXd s(k * k, 2);
    const double h = 2.0 / (k - 1);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        s(i * k + j, 0) = -1.0 + i * h;
        s(i * k + j, 1) = -1.0 + j * h;
      }
    return PointSet(std::move(s), "regular-grid(" + std::to_string(k) + ")");
  }

  /// The (k-1)^2 cell midpoints of the regular k x k grid on [-1,1]^2.
  static PointSet midpoint_grid(int k) {
    if (k < 2) throw std::invalid_argument("midpoint_grid: need k >= 2");
    const int c = k - 1;
    Eigen::MatrixXd s(c * c, 2);
    const double h = 2.0 / c;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) {
        s(i * c + j, 0) = -1.0 + (i + 0.5) * h;
        s(i * c + j, 1) = -1.0 + (j + 0.5) * h;
      }
    return PointSet(std::move(s), "midpoint-grid(" + std::to_string(k) + ")");
  }

  /// n uniform points in [lo, hi]^dim from a fixed-seed generator.
  static PointSet random(Eigen::Index n, int dim, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd s(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int c = 0; c < dim; ++c) s(i, c) = u(gen);
    return PointSet(std::move(s), "random(" + std::to_string(seed) + ")");
  }

  Eigen::Index size() const { return sites_.rows(); }
  int dim() const { return int(sites_.cols()); }
  bool empty() const { return sites_.rows() == 0; }
  const Eigen::MatrixXd& sites() const { return sites_; }
  const std::string& tag() const { return tag_; }
  auto operator[](Eigen::Index i) const { return sites_.row(i); }

  PointSet scaled(double factor) const { return PointSet(sites_ * factor, tag_ + "*scaled"); }

  PointSet with_point(const Eigen::RowVectorXd& p) const {
    Eigen::MatrixXd s(sites_.rows() + 1, sites_.cols());
    s << sites_, p;
    return PointSet(std::move(s));
  }

  double min_pairwise_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < size(); ++i)
      for (Eigen::Index j = i + 1; j < size(); ++j)
        best = std::min(best, (sites_.row(i) - sites_.row(j)).norm());
    return best;
  }

  /// max over `probe` of the distance to the nearest site; a discrete
  /// stand-in for the fill distance sup_{y in Omega} min_{x in X} |x - y|.
  double fill_distance(const PointSet& probe) const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < probe.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < size(); ++j)
        nearest = std::min(nearest, (probe.sites_.row(i) - sites_.row(j)).norm());
      worst = std::max(worst, nearest);
    }
    return worst;
  }

 private:
  Eigen::MatrixXd sites_;
  std::string tag_ = "explicit";
};

}  // namespace rbfscale
