#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>

#include <rbfscale/kernel.hpp>

using namespace rbfscale;

namespace {

// (2 pi)^{-1} int_0^inf 2 pi rho J_0(rho r) Phi^(rho) drho for a 2D radial
// profile, summed over unit panels.
double hankel_inverse_2d(double (*profile)(double), double r, double upper = 400.0) {
  double total = 0.0;
  for (double a = 0.0; a < upper; a += 1.0) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double rho) { return rho * boost::math::cyl_bessel_j(0, rho * r) * profile(rho); }, a, a + 1.0,
        10, 1e-13);
  }
  return total;
}

double ms3_profile(double rho) { return std::pow(1.0 + rho * rho, -3.0); }

}  // namespace

TEST(Kernel, UnscaledValues) {
  EXPECT_EQ(eval(RadialKernel::gaussian(), 0.0), 1.0);
  EXPECT_EQ(eval(RadialKernel::wendland(), 1.5), 0.0);
  EXPECT_EQ(eval(RadialKernel::polyharmonic(3), 0.0), 0.0);
  EXPECT_NEAR(eval(RadialKernel::inverse_multiquadric(), 2.0), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(eval(RadialKernel::polyharmonic(4), 2.0), 64.0 * std::log(2.0), 1e-12);
}

TEST(Kernel, Ms3OriginFromSpectrum) {
  // (2 pi)^{-1} int 2 pi rho (1 + rho^2)^{-3} drho = 1/4
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double t) {
        const double rho = t / (1.0 - t);
        return rho * ms3_profile(rho) / ((1.0 - t) * (1.0 - t));
      },
      0.0, 1.0, 15, 1e-14);
  EXPECT_NEAR(eval(RadialKernel::matern(3, 2), 0.0), oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.25, 1e-12);
}

TEST(Kernel, NegativeRadiusRejected) {
  EXPECT_THROW(eval(RadialKernel::gaussian(), -1.0), std::domain_error);
  EXPECT_THROW(eval(RadialKernel::matern(3, 2), std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(Kernel, ScaledValues) {
  EXPECT_NEAR(eval_scaled(RadialKernel::gaussian(1.0), 2.0, 1.0), std::exp(-4.0), 1e-16);
  EXPECT_NEAR(eval_scaled(RadialKernel::polyharmonic(3), 7.0, 2.0), 16.0 * std::log(2.0), 1e-13);
  // w3.5 at eps = 1, r = 4 evaluates the profile at 0.8
  const double t = 0.2;
  const double direct = std::pow(t, 6) * (35 * 0.64 + 18 * 0.8 + 3);
  EXPECT_NEAR(eval_scaled(RadialKernel::wendland(), 1.0, 4.0), direct, 1e-15);
  EXPECT_THROW(eval_scaled(RadialKernel::gaussian(), 0.0, 1.0), std::domain_error);
  EXPECT_THROW(eval_scaled(RadialKernel::gaussian(), -1.0, 1.0), std::domain_error);
}

TEST(Kernel, PreScales) {
  EXPECT_EQ(RadialKernel::gaussian().pre_scale(), 10.0);
  EXPECT_EQ(RadialKernel::inverse_multiquadric().pre_scale(), 10.0);
  EXPECT_EQ(RadialKernel::wendland().pre_scale(), 0.2);
  EXPECT_EQ(RadialKernel::matern(3, 2).pre_scale(), 1.0);
  EXPECT_EQ(RadialKernel::gaussian().effective_scale(0.5), 5.0);
  EXPECT_EQ(RadialKernel::polyharmonic(3).effective_scale(123.0), 1.0);
}

TEST(Kernel, MaternHalfIntegerClosedForm1D) {
  // inverse transform of (1 + rho^2)^{-2} on the line
  const RadialKernel k = RadialKernel::matern(2, 1);
  for (double r : {0.0, 0.1, 1.0, 3.0, 12.0})
    EXPECT_NEAR(k(r), std::sqrt(M_PI / 8.0) * (1.0 + r) * std::exp(-r), 1e-14) << r;
}

TEST(Kernel, Ms3MatchesHankelInverse) {
  const RadialKernel k = RadialKernel::matern(3, 2);
  for (double r : {0.0, 0.5, 1.0, 2.0}) EXPECT_NEAR(k(r), hankel_inverse_2d(ms3_profile, r), 1e-6) << r;
}

TEST(Kernel, SpectrumProfiles) {
  const auto ms3 = spectrum(RadialKernel::matern(3, 2));
  ASSERT_TRUE(ms3);
  EXPECT_NEAR(ms3->profile(0.0), 1.0, 1e-15);
  EXPECT_NEAR(ms3->profile(1.0), 0.125, 1e-15);
  const auto ph3 = spectrum(RadialKernel::polyharmonic(3));
  ASSERT_TRUE(ph3);
  EXPECT_NEAR(ph3->profile(2.0), std::pow(2.0, -6), 1e-15);
  EXPECT_FALSE(spectrum(RadialKernel::inverse_multiquadric()));
  EXPECT_FALSE(spectrum(RadialKernel::wendland()));
  const auto g = spectrum(RadialKernel::gaussian());
  ASSERT_TRUE(g);
  EXPECT_NEAR(g->profile(0.0), 0.5, 1e-15);
}

TEST(Kernel, PositiveSpectraOnLongRange) {
  // the Gaussian profile underflows in double long before 1e6, so
  // positivity is checked on the log scale
  for (const auto& k : {RadialKernel::gaussian(), RadialKernel::matern(3, 2)}) {
    const auto s = spectrum(k);
    for (double rho = 0.0; rho <= 1e6; rho = rho < 1 ? rho + 0.125 : rho * 1.5) {
      const double lp = s->log_profile(rho);
      EXPECT_TRUE(std::isfinite(lp)) << k.name() << ' ' << rho;
    }
    EXPECT_GT(s->profile(10.0), 0.0);
  }
}

TEST(Kernel, WendlandCompactSupport) {
  const RadialKernel w = RadialKernel::wendland();
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(w(1.0 + 9.0 * i / 999.0), 0.0);
  EXPECT_GT(w(0.999), 0.0);
}

TEST(Kernel, SmoothnessMetadata) {
  EXPECT_EQ(RadialKernel::matern(3, 2).beta(), 6.0);
  EXPECT_EQ(RadialKernel::wendland().beta(), 7.0);
  EXPECT_EQ(RadialKernel::wendland().beta(), 2.0 * *RadialKernel::wendland().sobolev_m());
  EXPECT_EQ(RadialKernel::gaussian().smoothness_class(), SmoothnessClass::analytic);
  EXPECT_EQ(RadialKernel::polyharmonic(4).cpd_order(), 4);
  EXPECT_EQ(RadialKernel::polyharmonic(3).tail_degree(), 2);
  EXPECT_TRUE(RadialKernel::matern(3, 2).positive_definite());
}

TEST(Kernel, CatalogNames) {
  for (const char* n : {"g", "mq", "ms3", "w3.5", "ph3", "ph4"}) EXPECT_EQ(RadialKernel::from_name(n).name(), n);
  EXPECT_THROW(RadialKernel::from_name("ms4"), std::invalid_argument);
  EXPECT_THROW(RadialKernel::matern(1, 2), std::invalid_argument);
  EXPECT_THROW(RadialKernel::polyharmonic(1), std::invalid_argument);
}
