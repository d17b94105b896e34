#pragma once

// Native-space norms. Interpolant norms come from the coefficient quadratic
// form; function norms with known spectra come from radial quadrature of
//   |f|_{Phi_eps}^2 = (2 pi)^{-d/2} int |f^(w)|^2 / Phi^_eps(w) dw,
//   Phi^_eps(w) = eps^{-d} Phi^(w / eps).

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "interpolation.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

namespace rbfscale {

inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

class UnsupportedKernel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function on R^d known through the radial profile of its Fourier
/// transform (same convention as KernelSpectrum).
struct SpectralFunction {
  int dim = 2;
  std::function<double(double)> log_profile;
  std::optional<double> bandlimit;
  std::string label;
  /// pointwise values, when available in closed form
  std::function<double(const Eigen::RowVectorXd&)> value;

  double profile(double rho) const { return std::exp(log_profile(rho)); }

  /// exp(-a |x|^2), with transform (2a)^{-d/2} exp(-rho^2 / (4a)).
  static SpectralFunction gaussian_bump(double a, int dim = 2) {
    if (!(a > 0.0)) throw std::domain_error("gaussian_bump: width parameter must be positive");
    SpectralFunction f;
    f.dim = dim;
    const double log_c = -0.5 * dim * std::log(2.0 * a);
    f.log_profile = [a, log_c](double rho) { return log_c - rho * rho / (4.0 * a); };
    f.label = "gaussian_bump(" + std::to_string(a) + ")";
    f.value = [a](const Eigen::RowVectorXd& x) { return std::exp(-a * x.squaredNorm()); };
    return f;
  }

  /// x -> phi(pre_scale * eps * |x - center|), transform Phi^_eps.
  static SpectralFunction kernel_translate(const RadialKernel& kernel, double eps,
                                           const Eigen::RowVectorXd& center) {
    const int dim = int(center.size());
    auto spec = spectrum(kernel, dim);
    if (!spec) throw UnsupportedKernel("kernel_translate: no spectrum for " + kernel.name());
    const double scale = kernel.effective_scale(eps);
    SpectralFunction f;
    f.dim = dim;
    f.log_profile = [spec = *spec, scale, dim](double rho) {
      return -dim * std::log(scale) + spec.log_profile(rho / scale);
    };
    f.label = "translate(" + kernel.name() + ")";
    f.value = [kernel, scale, center](const Eigen::RowVectorXd& x) {
      return kernel(scale * (x - center).norm());
    };
    return f;
  }

  /// Indicator spectrum of the ball rho <= b: a band-limited function.
  static SpectralFunction band_indicator(double b, int dim = 2) {
    if (!(b > 0.0)) throw std::domain_error("band_indicator: bandlimit must be positive");
    SpectralFunction f;
    f.dim = dim;
    f.bandlimit = b;
    f.log_profile = [b](double rho) {
      return rho <= b ? 0.0 : -std::numeric_limits<double>::infinity();
    };
    f.label = "band_indicator(" + std::to_string(b) + ")";
    if (dim == 1) {
      f.value = [b](const Eigen::RowVectorXd& x) {
        const double t = std::abs(x(0));
        const double c = 2.0 / std::sqrt(2.0 * std::numbers::pi);
        return t < 1e-12 ? c * b : c * std::sin(b * t) / t;
      };
    } else if (dim == 2) {
      f.value = [b](const Eigen::RowVectorXd& x) {
        const double r = x.norm();
        return r < 1e-12 ? 0.5 * b * b : b * boost::math::cyl_bessel_j(1, b * r) / r;
      };
    }
    return f;
  }

  /// f(eps x): transform eps^{-d} f^(rho / eps).
  SpectralFunction scaled(double eps) const {
    SpectralFunction g = *this;
    const auto base = log_profile;
    const int d = dim;
    g.log_profile = [base, eps, d](double rho) { return -d * std::log(eps) + base(rho / eps); };
    if (bandlimit) g.bandlimit = *bandlimit * eps;
    if (value) {
      const auto v = value;
      g.value = [v, eps](const Eigen::RowVectorXd& x) { return v(eps * x); };
    }
    g.label = label + "*scaled";
    return g;
  }
};

namespace detail {

/// (2 pi)^{-d/2} c_d int_0^upper h(rho) rho^{d-1} drho
template <class F>
double radial_spectral_integral(F&& h, int dim, std::optional<double> upper) {
  auto integrand = [&](double rho) {
    const double v = h(rho);
    return dim == 1 ? v : v * std::pow(rho, dim - 1);
  };
  const double pre = std::pow(2.0 * std::numbers::pi, -0.5 * dim) * quad::sphere_factor(dim);
  if (upper) {
    // panels of unit width keep the adaptive rule resolving the profile
    double total = 0.0;
    for (double lo = 0.0; lo < *upper; lo += 1.0) total += quad::integrate(integrand, lo, std::min(lo + 1.0, *upper));
    return pre * total;
  }
  return pre * quad::integrate_to_infinity(integrand);
}

}  // namespace detail

/// |f|^2_{W_2^j} = (2 pi)^{-d/2} int |f^|^2 |w|^{2j} dw; j = 0 is the L_2 norm
/// squared in the same (2 pi)^{-d/2} normalization as the native-space norms.
inline double sobolev_seminorm_squared(const SpectralFunction& f, int j) {
  auto h = [&](double rho) {
    const double lp = f.log_profile(rho);
    if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
    const double v = std::exp(2.0 * lp);
    return j == 0 ? v : v * std::pow(rho, 2 * j);
  };
  return detail::radial_spectral_integral(h, f.dim, f.bandlimit);
}

inline double l2_norm_squared(const SpectralFunction& f) { return sobolev_seminorm_squared(f, 0); }

/// True when |f^|^2 / Phi^_eps fails to decay: a non-finite sample, or growth
/// over the last decade of geometric radii up to 200 (in units of the
/// effective kernel scale when that exceeds 1).
template <class F>
bool integrand_diverges(F&& h, int dim, double effective_scale) {
  const double top = 200.0 * std::max(1.0, effective_scale);
  double prev = 0.0;
  double at_decade_start = 0.0;
  const int per_decade = 10;
  for (int k = 4 * per_decade; k >= 0; --k) {
    const double rho = top * std::pow(10.0, -double(k) / per_decade);
    double v = h(rho);
    if (dim > 1) v *= std::pow(rho, dim - 1);
    if (!std::isfinite(v)) return true;
    if (k == per_decade) at_decade_start = v;
    prev = v;
  }
  return prev > at_decade_start && prev > 0.0;
}

/// |f|_{Phi_eps} by adaptive radial quadrature, or kDivergent when the
/// integral does not exist (analytic kernels with eps < 1 and
/// non-band-limited f). Throws UnsupportedKernel if Phi has no spectrum.
inline double quadrature_norm(const SpectralFunction& f, const RadialKernel& kernel, double eps) {
  const auto spec = spectrum(kernel, f.dim);
  if (!spec || kernel.family() == KernelFamily::polyharmonic)
    throw UnsupportedKernel("quadrature_norm: no usable spectrum for kernel " + kernel.name());
  const double scale = kernel.effective_scale(eps);
  const int d = f.dim;
  const double log_scale_shift = d * std::log(scale);
  auto h = [&](double rho) {
    const double lf = f.log_profile(rho);
    if (lf == -std::numeric_limits<double>::infinity()) return 0.0;
    // |f^|^2 / (eps^{-d} Phi^(rho/eps))
    return std::exp(2.0 * lf + log_scale_shift - spec->log_profile(rho / scale));
  };
  if (!f.bandlimit && spec->exponential_decay && integrand_diverges(h, d, scale)) return kDivergent;
  const double sq = detail::radial_spectral_integral(h, d, f.bandlimit);
  if (!std::isfinite(sq)) return kDivergent;
  return std::sqrt(sq);
}

/// sqrt(eps^d sum_{j=0}^m C(m,j) eps^{-2j} |f|^2_{W_2^j}), the closed form of
/// the W_2^m(R^d) Matern norm at scale eps.
inline double sobolev_norm_formula(const SpectralFunction& f, int m, double eps) {
  if (m < 1) throw std::invalid_argument("sobolev_norm_formula: m must be positive");
  if (!(eps > 0.0)) throw std::domain_error("sobolev_norm_formula: eps must be positive");
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    sum += binom * std::pow(eps, -2.0 * j) * sobolev_seminorm_squared(f, j);
    binom = binom * (m - j) / (j + 1);
  }
  return std::sqrt(std::pow(eps, f.dim) * sum);
}

/// Upper end of the useful eps range: scales beyond it give
/// |f|_{Phi_eps} > |f|_Phi. Uses the lower bound
/// |f|^2_{Phi_eps} >= eps_eff^d |f|^2_{L_2} / |Phi^|_inf (the squared L_2 norm;
/// the unsquared form does not balance dimensionally). Returned in user eps,
/// i.e. divided by the kernel's pre_scale.
inline double admissible_scale_limit(const SpectralFunction& f, const RadialKernel& kernel) {
  const auto spec = spectrum(kernel, f.dim);
  if (!spec || kernel.family() == KernelFamily::polyharmonic)
    throw UnsupportedKernel("admissible_scale_limit: no usable spectrum for kernel " + kernel.name());
  const double native = quadrature_norm(f, kernel, 1.0);
  if (!std::isfinite(native)) return kDivergent;
  const double l2 = l2_norm_squared(f);
  const double eff = std::pow(native * native * spec->sup / l2, 1.0 / f.dim);
  return eff / kernel.pre_scale();
}

/// delta^-_Phi(K) = inf_{|w| <= K} Phi^(w) and delta^+ = sup, for radially
/// monotone decreasing profiles.
inline double spectrum_inf_on_ball(const KernelSpectrum& s, double k) { return s.profile(k); }
inline double spectrum_sup_on_ball(const KernelSpectrum& s, double) { return s.profile(0.0); }

struct NativeNorm {
  double value = 0.0;
  bool conditioning_warning = false;
};

/// sqrt(y^T alpha) for positive definite kernels, sqrt(lambda^T A lambda) over
/// the kernel block for CPD kernels (the tail carries no norm).
inline NativeNorm native_norm_checked(const Interpolant& s) {
  if (!s.ok()) throw std::logic_error("native_norm: interpolant status " + to_string(s.status()));
  double q;
  double scale;
  if (s.kernel().positive_definite()) {
    q = s.values().dot(s.coefficients());
    scale = s.values().cwiseAbs().dot(s.coefficients().cwiseAbs());
  } else {
    const Eigen::Index n = s.system().num_sites();
    const auto a = s.system().matrix().topLeftCorner(n, n);
    q = s.coefficients().dot(a * s.coefficients());
    scale = s.coefficients().cwiseAbs().dot(a.cwiseAbs() * s.coefficients().cwiseAbs());
  }
  NativeNorm out;
  out.conditioning_warning = q < -1e-10 * scale;
  out.value = std::sqrt(std::abs(q));
  return out;
}

inline double native_norm_of_interpolant(const Interpolant& s) { return native_norm_checked(s).value; }

enum class NormSource { interpolant, quadrature };

struct NormScan {
  std::string kernel;
  std::string function;
  std::vector<double> eps;
  std::vector<double> values;  // kDivergent marks an inadmissible scale
  NormSource source = NormSource::quadrature;
};

inline NormScan scan_quadrature_norm(const SpectralFunction& f, const RadialKernel& kernel,
                                     const std::vector<double>& eps_grid) {
  NormScan scan{kernel.name(), f.label, eps_grid, {}, NormSource::quadrature};
  scan.values.reserve(eps_grid.size());
  for (double e : eps_grid) scan.values.push_back(quadrature_norm(f, kernel, e));
  return scan;
}

}  // namespace rbfscale
