#pragma once

// Adaptive radial quadrature on [a, b] and [a, inf).

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rbfscale::quad {

/// Adaptive 15-point Gauss-Kronrod on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &err);
}

/// int_a^limit f over doubling panels [a, a+1], [a+1, a+2], [a+2, a+4], ...
/// Stops once two consecutive panels each add less than `tail_tol` of the
/// running total, or at `limit`.
template <class F>
double integrate_to_infinity(F&& f, double a = 0.0, double tail_tol = 1e-13,
                             double limit = 1e7) {
  double total = integrate(f, a, a + 1.0);
  double lo = a + 1.0, width = 1.0;
  int quiet = 0;
  while (lo < limit) {
    const double hi = std::min(lo + width, limit);
    const double part = integrate(f, lo, hi);
    total += part;
    if (!std::isfinite(total)) return total;
    quiet = std::abs(part) <= tail_tol * std::abs(total) ? quiet + 1 : 0;
    if (quiet >= 2) break;
    lo = hi;
    width *= 2.0;
  }
  return total;
}

/// Surface measure factor for radial integrals in R^d: int_{R^d} g(|w|) dw
/// = c_d int_0^inf g(rho) rho^{d-1} drho with c_1 = 2, c_2 = 2 pi, c_3 = 4 pi.
inline double sphere_factor(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: break;
  }
  // 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace rbfscale::quad
