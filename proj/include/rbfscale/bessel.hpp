#pragma once

// Modified Bessel functions of the second kind for integer and half-integer
// orders, as needed by the Whittle-Matern kernels.
//
// Integer orders start from K_0, K_1 (power series for x <= 2, Steed's
// continued fraction CF2 above) and recur upward. Half-integer orders start
// from the closed form of K_{1/2}. Upward recurrence is stable for K_nu.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace rbfscale::bessel {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// K_0(x), K_1(x) from the ascending series, valid for 0 < x <= 2.
inline std::pair<double, double> k01_series(double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  const double log_half = std::log(half);

  // K_0 = -(ln(x/2) + gamma) I_0 + sum_k H_k q^k / (k!)^2
  // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k (psi(k+1) + psi(k+2)) q^k / (k!(k+1)!)
  double term0 = 1.0;  // q^k / (k!)^2
  double term1 = 1.0;  // q^k / (k!(k+1)!)
  double harmonic = 0.0;
  double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term0 *= q / (double(k) * double(k));
      term1 *= q / (double(k) * double(k + 1));
      harmonic += 1.0 / k;
    }
    const double psi_k1 = -kEulerGamma + harmonic;
    const double psi_k2 = psi_k1 + 1.0 / (k + 1);
    i0 += term0;
    i1 += term1;
    s0 += harmonic * term0;
    s1 += (psi_k1 + psi_k2) * term1;
    if (term0 < 1e-18 * i0 && k > 2) break;
  }
  i1 *= half;  // I_1 = (x/2) sum q^k / (k!(k+1)!)
  const double k0 = -(log_half + kEulerGamma) * i0 + s0;
  const double k1 = 1.0 / x + log_half * i1 - 0.5 * half * s1;
  return {k0, k1};
}

// K_mu(x), K_{mu+1}(x) for |mu| <= 1/2 and x >= 2 via Steed's method on CF2.
inline std::pair<double, double> steed_cf2(double mu, double x) {
  const double a1 = 0.25 - mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0, q2 = 1.0;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  const double kmu1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, kmu1};
}

}  // namespace detail

/// K_0(x) and K_1(x) for x > 0.
inline std::pair<double, double> k0_k1(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
  if (x <= 2.0) return detail::k01_series(x);
  return detail::steed_cf2(0.0, x);
}

/// K_n(x) for integer n >= 0 and x > 0.
inline double k_integer(int n, double x) {
  if (n < 0) n = -n;
  auto [km, k] = k0_k1(x);
  if (n == 0) return km;
  for (int j = 1; j < n; ++j) {
    const double next = km + (2.0 * j / x) * k;
    km = k;
    k = next;
  }
  return k;
}

/// K_{n+1/2}(x) for integer n >= 0 and x > 0 (closed form via recurrence).
inline double k_half_integer(int n, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
  double km = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);  // K_{1/2}
  if (n == 0) return km;
  double k = km * (1.0 + 1.0 / x);  // K_{3/2}
  for (int j = 1; j < n; ++j) {
    const double nu = j + 0.5;
    const double next = km + (2.0 * nu / x) * k;
    km = k;
    k = next;
  }
  return k;
}

/// K_nu(x) for nu a non-negative integer or half-integer.
inline double k_nu(double nu, double x) {
  nu = std::abs(nu);
  const double twice = 2.0 * nu;
  if (std::abs(twice - std::round(twice)) > 1e-12)
    throw std::domain_error("bessel: only integer and half-integer orders are supported");
  const long n2 = std::lround(twice);
  if (n2 % 2 == 0) return k_integer(int(n2 / 2), x);
  return k_half_integer(int((n2 - 1) / 2), x);
}

}  // namespace rbfscale::bessel
