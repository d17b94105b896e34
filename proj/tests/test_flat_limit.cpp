#include <gtest/gtest.h>

#include <cmath>

#include <rbfscale/flat_limit.hpp>
#include <rbfscale/point_set.hpp>
#include <rbfscale/test_functions.hpp>

using namespace rbfscale;

namespace {

Eigen::VectorXd on(const PointSet& x, double (*f)(double, double)) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = f(x[i](0), x[i](1));
  return y;
}

double quadratic(double x, double y) { return x * x - y; }

// least squares in a tensor Legendre basis, which spans the same space but is well conditioned on the square
double legendre_fit_error(const PointSet& x, const Eigen::VectorXd& y, const PointSet& mids,
                          const Eigen::VectorXd& truth, int degree) {
  auto design = [degree](const PointSet& p) {
    Eigen::MatrixXd v(p.size(), (degree + 1) * (degree + 2) / 2);
    for (Eigen::Index r = 0; r < p.size(); ++r) {
      int col = 0;
      for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j)
          v(r, col++) = std::legendre(unsigned(i), p[r](0)) * std::legendre(unsigned(j), p[r](1));
    }
    return v;
  };
  const Eigen::VectorXd c = design(x).jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  return (design(mids) * c - truth).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(PolynomialBaseline, MaxDegreeRule) {
  EXPECT_EQ(default_max_degree(121), 14);
  EXPECT_EQ(default_max_degree(441), 20);
  EXPECT_EQ(default_max_degree(6), 2);
  EXPECT_EQ(default_max_degree(5), 1);
}

TEST(PolynomialBaseline, ConstantData) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  const PolynomialFit fit = fit_polynomial(x, Eigen::VectorXd::Constant(121, 3.0), mids, Eigen::VectorXd::Constant(100, 3.0));
  EXPECT_EQ(fit.degree, 0);
  EXPECT_LE(fit.error, 1e-12);
}

TEST(PolynomialBaseline, QuadraticReproduced) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  const PolynomialFit fit = fit_polynomial(x, on(x, quadratic), mids, on(mids, quadratic));
  EXPECT_EQ(fit.degree, 2);
  EXPECT_LE(fit.error, 1e-10);
  EXPECT_NEAR(fit(Eigen::RowVector2d(0.3, -0.2)), 0.29, 1e-12);
}

TEST(PolynomialBaseline, ChosenDegreeAttainsTableMinimum) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  for (const auto& f : test_function_catalog()) {
    const PolynomialFit fit = fit_polynomial(x, f.on(x), mids, f.on(mids));
    ASSERT_EQ(fit.errors_by_degree.size(), 15u);
    const double best = *std::min_element(fit.errors_by_degree.begin(), fit.errors_by_degree.end());
    EXPECT_LE(fit.error, best * (1 + 1e-12) + 1e-13) << f.label;
    EXPECT_EQ(fit.error, fit.errors_by_degree[std::size_t(fit.degree)]);
  }
}

TEST(PolynomialBaseline, LegendreBasisAgrees) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  const TestFunction f = test_function("runge_good");
  const PolynomialFit fit = fit_polynomial(x, f.on(x), mids, f.on(mids));
  const double other = legendre_fit_error(x, f.on(x), mids, f.on(mids), fit.degree);
  EXPECT_LE(std::abs(other - fit.error) / fit.error, 1e-4) << fit.error << " vs " << other;
}

TEST(PolynomialBaseline, CutoffInsensitive) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  for (const auto& f : test_function_catalog()) {
    const double a = fit_polynomial(x, f.on(x), mids, f.on(mids), -1, 1e-10).error;
    const double b = fit_polynomial(x, f.on(x), mids, f.on(mids), -1, 1e-13).error;
    EXPECT_LE(std::abs(a - b) / std::max(a, b), 0.1) << f.label;
  }
}

TEST(PolynomialBaseline, Deterministic) {
  const PointSet x = PointSet::regular_grid(21), mids = PointSet::midpoint_grid(21);
  const TestFunction f = test_function("runge_bad");
  const PolynomialFit a = fit_polynomial(x, f.on(x), mids, f.on(mids));
  const PolynomialFit b = fit_polynomial(x, f.on(x), mids, f.on(mids));
  EXPECT_EQ(a.error, b.error);
  EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(PolynomialBaseline, TooManyMonomials) {
  const PointSet x = PointSet::regular_grid(3);
  EXPECT_THROW(fit_polynomial(x, Eigen::VectorXd::Zero(9), x, Eigen::VectorXd::Zero(9), 3), std::invalid_argument);
}

TEST(PolyharmonicBaseline, ReproducesTailPolynomials) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  auto cubic = [](double a, double b) { return 1 + a - 2 * b + a * a * b - b * b * b; };
  Eigen::VectorXd y(x.size()), t(mids.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = cubic(x[i](0), x[i](1));
  for (Eigen::Index i = 0; i < mids.size(); ++i) t(i) = cubic(mids[i](0), mids[i](1));
  EXPECT_LE(polyharmonic_baseline(RadialKernel::polyharmonic(4), x, y, mids, t).error, 1e-9);
  const Eigen::VectorXd q = on(x, quadratic);
  EXPECT_LE(polyharmonic_baseline(RadialKernel::polyharmonic(3), x, q, mids, on(mids, quadratic)).error, 1e-9);
}

TEST(PolyharmonicBaseline, FiniteOnCubicData) {
  const PointSet x = PointSet::regular_grid(21), mids = PointSet::midpoint_grid(21);
  const TestFunction f = test_function("r3");
  for (int m : {3, 4}) {
    const BaselineResult r = polyharmonic_baseline(RadialKernel::polyharmonic(m), x, f.on(x), mids, f.on(mids));
    EXPECT_EQ(r.status, SolveStatus::ok);
    EXPECT_TRUE(std::isfinite(r.error));
    EXPECT_GT(r.native_norm, 0.0);
  }
}

TEST(PolyharmonicBaseline, EpsPassesThrough) {
  const PointSet x = PointSet::regular_grid(11), mids = PointSet::midpoint_grid(11);
  const TestFunction f = test_function("runge_bad");
  const RadialKernel k = RadialKernel::polyharmonic(3);
  EXPECT_EQ(polyharmonic_baseline(k, x, f.on(x), mids, f.on(mids), 0.1).error,
            polyharmonic_baseline(k, x, f.on(x), mids, f.on(mids), 9.0).error);
  EXPECT_THROW(polyharmonic_baseline(RadialKernel::matern(3, 2), x, f.on(x), mids, f.on(mids)), std::invalid_argument);
}
