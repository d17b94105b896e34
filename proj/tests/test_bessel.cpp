#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include <rbfscale/bessel.hpp>

namespace bessel = rbfscale::bessel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> log_points(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

}  // namespace

TEST(Bessel, K0K1MatchBoostAcrossRange) {
  for (double x : log_points(1e-8, 50.0, 400)) {
    const auto [k0, k1] = bessel::k0_k1(x);
    EXPECT_LE(rel(k0, boost::math::cyl_bessel_k(0, x)), 1e-12) << x;
    EXPECT_LE(rel(k1, boost::math::cyl_bessel_k(1, x)), 1e-12) << x;
  }
}

TEST(Bessel, IntegerOrdersByRecurrence) {
  for (int n : {2, 3, 5}) {
    for (double x : log_points(1e-3, 50.0, 120)) {
      EXPECT_LE(rel(bessel::k_integer(n, x), boost::math::cyl_bessel_k(n, x)), 1e-11) << n << ' ' << x;
    }
  }
}

TEST(Bessel, HalfIntegerClosedForm) {
  // K_{1/2}(x) = sqrt(pi / (2x)) e^{-x}
  for (double x : {0.01, 0.5, 1.0, 7.0, 30.0})
    EXPECT_LE(rel(bessel::k_half_integer(0, x), std::sqrt(M_PI / (2 * x)) * std::exp(-x)), 1e-13);
  for (int n : {1, 2, 3}) {
    for (double x : log_points(1e-3, 40.0, 60))
      EXPECT_LE(rel(bessel::k_half_integer(n, x), boost::math::cyl_bessel_k(n + 0.5, x)), 1e-11);
  }
}

TEST(Bessel, GeneralOrderDispatch) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    for (double x : {1e-4, 0.3, 1.9, 2.1, 10.0})
      EXPECT_LE(rel(bessel::k_nu(nu, x), boost::math::cyl_bessel_k(nu, x)), 1e-11) << nu << ' ' << x;
  }
}

TEST(Bessel, SeriesAndContinuedFractionAgreeAtSwitch) {
  const auto a = bessel::k0_k1(2.0 - 1e-9);
  const auto b = bessel::k0_k1(2.0 + 1e-9);
  EXPECT_LE(rel(a.first, b.first), 1e-8);
  EXPECT_LE(rel(a.second, b.second), 1e-8);
}

TEST(Bessel, RejectsNonPositiveArgument) {
  EXPECT_THROW(bessel::k0_k1(0.0), std::domain_error);
  EXPECT_THROW(bessel::k0_k1(-1.0), std::domain_error);
}
