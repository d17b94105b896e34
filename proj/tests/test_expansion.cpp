#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <rbfscale/expansion.hpp>

using namespace rbfscale;

namespace {

Eigen::RowVectorXd at(double t) { return Eigen::RowVectorXd::Constant(1, t); }

std::vector<double> uniform_sites(int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -1.0 + 2.0 * i / (n - 1);
  return xs;
}

PointSet probes7() {
  Eigen::MatrixXd p(7, 1);
  for (int i = 0; i < 7; ++i) p(i, 0) = -0.9 + 1.8 * i / 6;
  return PointSet(p, "probes");
}

// classical Lagrange form of the polynomial interpolant
double lagrange(const std::vector<double>& xs, const Eigen::VectorXd& y, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double l = 1.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (k != j) l *= (t - xs[k]) / (xs[j] - xs[k]);
    s += l * y(Eigen::Index(j));
  }
  return s;
}

Eigen::VectorXd cos_data(const std::vector<double>& xs) {
  Eigen::VectorXd y(Eigen::Index(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) y(Eigen::Index(i)) = std::cos(xs[i]);
  return y;
}

struct Case {
  const char* kernel;
  int n;
  double lo, hi;
  int J;
};

RadialKernel unit_kernel(const std::string& name) {
  return name == "g" ? RadialKernel::gaussian(1.0) : RadialKernel::inverse_multiquadric(1.0);
}

class FlatLimitOracle : public ::testing::TestWithParam<Case> {};

}  // namespace

TEST_P(FlatLimitOracle, ConstantTermIsPolynomialInterpolant) {
  const Case c = GetParam();
  const auto xs = uniform_sites(c.n);
  const Eigen::VectorXd y = cos_data(xs);
  const ExpansionFit fit = fit_expansion(unit_kernel(c.kernel), PointSet::on_line(xs), y, probes7(),
                                         geometric_samples(c.lo, c.hi, 12), c.J);
  for (Eigen::Index i = 0; i < 7; ++i) {
    const double t = fit.probes()[i](0);
    EXPECT_NEAR(fit.p0(at(t)), lagrange(xs, y, t), 1e-5) << t;
  }
  EXPECT_LE(fit.residual(), 1e-6 * fit.scale());
  for (double x : xs)
    for (int j = 1; j <= c.J; ++j) EXPECT_LE(fit.term_contribution(j, at(x)), 10 * fit.residual()) << x << ' ' << j;
}

INSTANTIATE_TEST_SUITE_P(Kernels, FlatLimitOracle,
                         ::testing::Values(Case{"g", 3, 0.05, 0.4, 3}, Case{"g", 5, 0.05, 0.4, 3},
                                           Case{"g", 7, 0.1, 0.5, 3}, Case{"mq", 3, 0.05, 0.3, 4},
                                           Case{"mq", 5, 0.05, 0.4, 4}, Case{"mq", 7, 0.1, 0.5, 4}),
                         [](const auto& info) {
                           return std::string(info.param.kernel) + "_n" + std::to_string(info.param.n);
                         });

TEST(Expansion, DefaultSamplesAndWeights) {
  const auto e = geometric_samples(0.05, 0.4, 12);
  ASSERT_EQ(e.size(), 12u);
  EXPECT_NEAR(e.front(), 0.05, 1e-16);
  EXPECT_NEAR(e.back(), 0.4, 1e-15);
  const auto xs = uniform_sites(5);
  const ExpansionFit fit = fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), cos_data(xs), probes7(),
                                         ExpansionOptions{});
  EXPECT_EQ(fit.J(), 3);
  EXPECT_EQ(fit.coefficients().rows(), 4);
  EXPECT_EQ(fit.coefficients().cols(), 7);
  // term j is a fixed linear combination of the sampled interpolants
  const Eigen::RowVectorXd x = at(0.37);
  EXPECT_NEAR(fit.term(2, x), fit.weights().row(2).dot(fit.sample_values(x)), 1e-12);
}

TEST(Expansion, LinearInData) {
  const auto xs = uniform_sites(5);
  const Eigen::VectorXd y = cos_data(xs);
  const PointSet x = PointSet::on_line(xs);
  const ExpansionFit a = fit_expansion(RadialKernel::gaussian(1.0), x, y, probes7(), ExpansionOptions{});
  const ExpansionFit b = fit_expansion(RadialKernel::gaussian(1.0), x, Eigen::VectorXd(2 * y), probes7(), ExpansionOptions{});
  const Eigen::MatrixXd diff = b.coefficients() - 2 * a.coefficients();
  for (Eigen::Index i = 0; i < diff.size(); ++i)
    EXPECT_LE(std::abs(diff.data()[i]), 1e-8 * std::abs(2 * a.coefficients().data()[i]) + 1e-14);
}

TEST(Expansion, LinearDataReproduced) {
  const std::vector<double> xs{-1.0, 0.0, 1.0};
  const Eigen::Vector3d y(0.5 - 2 * xs[0], 0.5 - 2 * xs[1], 0.5 - 2 * xs[2]);
  const ExpansionFit fit = fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), y, probes7(),
                                         ExpansionOptions{});
  for (Eigen::Index i = 0; i < 7; ++i) {
    const double t = fit.probes()[i](0);
    EXPECT_NEAR(fit.p0(at(t)), 0.5 - 2 * t, 1e-6);
  }
  for (double x : xs)
    for (int j = 1; j <= 3; ++j) EXPECT_LE(fit.term_contribution(j, at(x)), 10 * fit.residual());
}

TEST(Expansion, EvenPowersSufficeOnThreeSites) {
  // with the same number of unknowns, an all-even basis fits the samples far
  // better than one trading two even powers for eps and eps^3
  const auto xs = uniform_sites(3);
  const Eigen::VectorXd y = cos_data(xs);
  const auto eps = geometric_samples(0.05, 0.4, 16);
  for (const auto& k : {RadialKernel::gaussian(1.0), RadialKernel::inverse_multiquadric(1.0)}) {
    for (int J : {2, 3}) {
      const ExpansionFit odd = fit_expansion(k, PointSet::on_line(xs), y, probes7(), eps, J, 2);
      const ExpansionFit even = fit_expansion(k, PointSet::on_line(xs), y, probes7(), eps, J + 2, 0);
      EXPECT_LT(even.residual(), odd.residual()) << k.name() << ' ' << J;
      EXPECT_EQ(odd.odd_terms(), 2);
      EXPECT_NO_THROW(odd.odd_term(1, at(0.2)));
    }
  }
}

TEST(Expansion, ErrorsAndDroppedSamples) {
  const auto xs = uniform_sites(7);
  const Eigen::VectorXd y = cos_data(xs);
  try {
    fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), y, probes7(), ExpansionOptions{});
    FAIL();
  } catch (const InsufficientSamples& e) {
    EXPECT_NE(std::string(e.what()).find("need 8"), std::string::npos);
  }
  const ExpansionFit fit = fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), y, probes7(),
                                         geometric_samples(0.1, 0.5, 12), 3);
  EXPECT_EQ(fit.eps_samples().size() + fit.dropped_samples().size(), 12u);
  EXPECT_FALSE(fit.dropped_samples().empty());
  EXPECT_THROW(fit_expansion(RadialKernel::matern(3, 2), PointSet::on_line(xs), y, probes7(), ExpansionOptions{}),
               std::invalid_argument);
}

TEST(Expansion, CsvLayout) {
  const auto xs = uniform_sites(3);
  const ExpansionFit fit = fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), cos_data(xs), probes7(),
                                         ExpansionOptions{});
  std::ostringstream os;
  write_expansion_csv(os, fit);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "probe,j,coefficient,residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 7 * 4);
}

TEST(ExtremalPoints, SymmetricMaxima) {
  // |t (1 - 2 t^2)| on [-1, 1] peaks at t = -1, 1 (value 1) and +-1/sqrt(6)
  const auto pts = extremal_points([](double t) { return t * (1 - 2 * t * t); }, -1.0, 1.0);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0], -1.0, 1e-9);
  EXPECT_NEAR(pts[1], 1.0, 1e-9);
  const auto inner = extremal_points([](double t) { return std::sin(3 * t); }, -1.0, 1.0);
  ASSERT_EQ(inner.size(), 2u);
  EXPECT_NEAR(inner[0], -M_PI / 6, 1e-7);
  EXPECT_NEAR(inner[1], M_PI / 6, 1e-7);
}

TEST(SignCriterion, Verdicts) {
  const std::vector<double> xs{-1.0, 0.0, 1.0};
  const Eigen::Vector3d y(1.0, 0.0, 1.0);
  const ExpansionFit fit = fit_expansion(RadialKernel::gaussian(1.0), PointSet::on_line(xs), y, probes7(),
                                         ExpansionOptions{});
  ASSERT_TRUE(fit.k_min().has_value());
  const int k = *fit.k_min();
  const double eps = fit.eps_samples().front();
  auto p0 = [&](double t) { return fit.p0(at(t)); };
  auto pk = [&](double t) { return fit.term(k, at(t)); };
  EXPECT_EQ(sign_criterion(fit, p0, eps).verdict, FlatLimitVerdict::flat_limit_exact);
  // the error of the flat limit is -p_{2k}, opposite in sign to the leading
  // correction eps^{2k} p_{2k}, for f = p0 + p_{2k}
  const SignCriterion plus = sign_criterion(fit, [&](double t) { return p0(t) + pk(t); }, eps);
  const SignCriterion minus = sign_criterion(fit, [&](double t) { return p0(t) - pk(t); }, eps);
  EXPECT_EQ(plus.verdict, FlatLimitVerdict::improvable);
  EXPECT_EQ(minus.verdict, FlatLimitVerdict::not_improvable);
  EXPECT_EQ(plus.checks.size(), 2u);
  EXPECT_EQ(to_string(plus.verdict), "improvable");
  EXPECT_EQ(to_string(minus.verdict), "not improvable");
}

TEST(ExtensionDemo, OppositeVerdictsOnThreePoints) {
  const PointSet x = PointSet::on_line({-1.0, 0.0, 1.0});
  const Eigen::Vector3d y(1.0, 0.0, 1.0);
  const ExtensionStudy r = extension_demo(x, y, RadialKernel::gaussian(1.0));
  ASSERT_EQ(r.extensions.size(), 2u);
  EXPECT_TRUE(r.opposite_verdicts());
  EXPECT_FALSE(r.extensions[0].scan.flat_side);
  EXPECT_TRUE(r.extensions[1].scan.flat_side);

  ExtensionOptions half;
  half.scan_max = 1.0;
  const ExtensionStudy h = extension_demo(x, y, RadialKernel::gaussian(1.0), half);
  ASSERT_EQ(h.extensions.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(h.extensions[i].criterion.verdict, r.extensions[i].criterion.verdict);
    EXPECT_EQ(h.extensions[i].scan.flat_side, r.extensions[i].scan.flat_side);
  }
}

TEST(ExtensionDemo, DegenerateAndInconclusive) {
  const PointSet x = PointSet::on_line({-1.0, 0.0, 1.0});
  const ExtensionStudy zero = extension_demo(x, Eigen::Vector3d::Zero(), RadialKernel::gaussian(1.0));
  EXPECT_TRUE(zero.flat_limit_exact);
  EXPECT_FALSE(zero.inconclusive);
  EXPECT_TRUE(zero.extensions.empty());

  ExtensionOptions j0;
  j0.fit.J = 0;
  const ExtensionStudy r = extension_demo(x, Eigen::Vector3d(1, 0, 1), RadialKernel::gaussian(1.0), j0);
  EXPECT_FALSE(r.higher_terms_available);
  EXPECT_TRUE(r.inconclusive);
  std::ostringstream os;
  write_extension_report(os, r);
  EXPECT_NE(os.str().find("inconclusive"), std::string::npos);
}
