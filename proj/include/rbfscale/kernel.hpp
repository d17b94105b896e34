#pragma once

// Radial kernel catalog: Gaussian (g), inverse multiquadric (mq),
// Whittle-Matern (ms3 and the rest of the family), Wendland phi_{3,2} (w3.5)
// and the thin-plate type polyharmonics (ph3, ph4).

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bessel.hpp"

namespace rbfscale {

enum class KernelFamily { gaussian, inverse_multiquadric, matern, wendland, polyharmonic };

enum class SmoothnessClass { analytic, finite, polyharmonic };

/// Radial profile of a kernel's d-variate Fourier transform, in the
/// convention f^(w) = (2 pi)^{-d/2} int f(x) exp(-i <x,w>) dx.
struct KernelSpectrum {
  std::string kernel;
  int dim = 2;
  /// log of the profile; -inf where the profile vanishes
  std::function<double(double)> log_profile;
  /// ||Phi^||_inf = Phi^(0); +inf for the generalized polyharmonic transform
  double sup = 0.0;
  bool exponential_decay = false;

  double profile(double rho) const { return std::exp(log_profile(rho)); }
};

class RadialKernel {
 public:
  /// e^{-r^2}, pre-scaled by 10 for the [-1,1]^2 experiments.
  static RadialKernel gaussian(double pre_scale = 10.0) {
    RadialKernel k(KernelFamily::gaussian, SmoothnessClass::analytic, pre_scale);
    return k;
  }

  /// (1 + r^2)^{-1/2}, pre-scaled by 10.
  static RadialKernel inverse_multiquadric(double pre_scale = 10.0) {
    return RadialKernel(KernelFamily::inverse_multiquadric, SmoothnessClass::analytic, pre_scale);
  }

  /// Whittle-Matern kernel reproducing W_2^m(R^d):
  /// 2^{1-m}/Gamma(m) r^{m-d/2} K_{m-d/2}(r), Fourier profile (1+rho^2)^{-m}.
  /// Requires 2m - d a positive integer.
  static RadialKernel matern(int m, int dim = 2, double pre_scale = 1.0) {
    if (dim < 1 || 2 * m <= dim)
      throw std::invalid_argument("matern: need m > d/2");
    RadialKernel k(KernelFamily::matern, SmoothnessClass::finite, pre_scale);
    k.order_ = m;
    k.dim_ = dim;
    k.sobolev_m_ = m;
    k.beta_ = 2.0 * m;
    const double nu = m - 0.5 * dim;
    k.matern_norm_ = std::pow(2.0, 1.0 - m) / std::tgamma(double(m));
    k.matern_origin_ = std::pow(2.0, nu - m) * std::tgamma(nu) / std::tgamma(double(m));
    return k;
  }

  /// Wendland phi_{3,2}(r) = (1-r)_+^6 (35 r^2 + 18 r + 3), pre-scaled by 0.2.
  static RadialKernel wendland(double pre_scale = 0.2) {
    RadialKernel k(KernelFamily::wendland, SmoothnessClass::finite, pre_scale);
    k.sobolev_m_ = 3.5;
    k.beta_ = 7.0;
    return k;
  }

  /// r^{2m-2} log r, the W_2^m(R^2) polyharmonic; scale free.
  static RadialKernel polyharmonic(int m) {
    if (m < 2) throw std::invalid_argument("polyharmonic: need m >= 2");
    RadialKernel k(KernelFamily::polyharmonic, SmoothnessClass::polyharmonic, 1.0);
    k.order_ = m;
    k.sobolev_m_ = m;
    k.beta_ = 2.0 * m;
    k.cpd_order_ = m;  // r^{2k} log r is CPD of order k+1, here k = m-1
    return k;
  }

  /// Looks up one of the catalog ids g, mq, ms3, w3.5, ph3, ph4.
  static RadialKernel from_name(std::string_view name) {
    if (name == "g") return gaussian();
    if (name == "mq") return inverse_multiquadric();
    if (name == "ms3") return matern(3, 2);
    if (name == "w3.5") return wendland();
    if (name == "ph3") return polyharmonic(3);
    if (name == "ph4") return polyharmonic(4);
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
  }

  RadialKernel with_pre_scale(double pre_scale) const {
    if (!(pre_scale > 0.0)) throw std::domain_error("pre_scale must be positive");
    RadialKernel k = *this;
    k.pre_scale_ = pre_scale;
    return k;
  }

  std::string name() const {
    switch (family_) {
      case KernelFamily::gaussian: return "g";
      case KernelFamily::inverse_multiquadric: return "mq";
      case KernelFamily::matern:
        return dim_ == 2 ? "ms" + std::to_string(order_)
                         : "ms" + std::to_string(order_) + "d" + std::to_string(dim_);
      case KernelFamily::wendland: return "w3.5";
      case KernelFamily::polyharmonic: return "ph" + std::to_string(order_);
    }
    return "?";
  }

  KernelFamily family() const { return family_; }
  SmoothnessClass smoothness_class() const { return smoothness_; }
  bool positive_definite() const { return cpd_order_ == 0; }
  int cpd_order() const { return cpd_order_; }
  /// Total degree of the polynomial tail, -1 when there is none.
  int tail_degree() const { return cpd_order_ - 1; }
  double pre_scale() const { return pre_scale_; }
  std::optional<double> sobolev_m() const { return sobolev_m_; }
  /// Algebraic decay exponent of the Fourier transform (0 for analytic kernels).
  double beta() const { return beta_; }
  /// Space dimension the Matern normalization refers to.
  int dim() const { return dim_; }

  /// phi(r), unscaled.
  double operator()(double r) const {
    if (r < 0.0 || std::isnan(r)) throw std::domain_error("kernel: negative radius");
    switch (family_) {
      case KernelFamily::gaussian: return std::exp(-r * r);
      case KernelFamily::inverse_multiquadric: return 1.0 / std::sqrt(1.0 + r * r);
      case KernelFamily::matern: return eval_matern(r);
      case KernelFamily::wendland: {
        if (r >= 1.0) return 0.0;
        const double t = 1.0 - r;
        const double t3 = t * t * t;
        return t3 * t3 * ((35.0 * r + 18.0) * r + 3.0);
      }
      case KernelFamily::polyharmonic: {
        if (r == 0.0) return 0.0;
        return std::pow(r, 2 * order_ - 2) * std::log(r);
      }
    }
    return 0.0;
  }

  /// pre_scale * eps, the factor actually applied to distances. Polyharmonics
  /// ignore eps; their pre_scale (1 unless set) only exists to exercise the
  /// scale invariance phi(r) -> phi(c r).
  double effective_scale(double eps) const {
    if (!(eps > 0.0)) throw std::domain_error("kernel: eps must be positive");
    return family_ == KernelFamily::polyharmonic ? pre_scale_ : pre_scale_ * eps;
  }

  /// phi(pre_scale * eps * r); polyharmonics ignore eps.
  double scaled(double eps, double r) const { return (*this)(effective_scale(eps) * r); }

 private:
  RadialKernel(KernelFamily f, SmoothnessClass s, double pre_scale)
      : family_(f), smoothness_(s), pre_scale_(pre_scale) {}

  double eval_matern(double r) const {
    const double nu = order_ - 0.5 * dim_;
    if (r < 1e-100) return matern_origin_;
    if (r > 745.0) return 0.0;
    // r^nu K_nu(r); for nu = 2 write r^2 K_2 = r^2 K_0 + 2 r K_1 to stay
    // accurate near the origin.
    if (std::abs(nu - 2.0) < 1e-12) {
      const auto [k0, k1] = bessel::k0_k1(r);
      return matern_norm_ * (r * r * k0 + 2.0 * r * k1);
    }
    return matern_norm_ * std::pow(r, nu) * bessel::k_nu(nu, r);
  }

  KernelFamily family_;
  SmoothnessClass smoothness_;
  double pre_scale_ = 1.0;
  int cpd_order_ = 0;
  int order_ = 0;
  int dim_ = 2;
  std::optional<double> sobolev_m_;
  double beta_ = 0.0;
  double matern_norm_ = 0.0;
  double matern_origin_ = 0.0;
};

inline double eval(const RadialKernel& kernel, double r) { return kernel(r); }

inline double eval_scaled(const RadialKernel& kernel, double eps, double r) {
  return kernel.scaled(eps, r);
}

/// Fourier profile of the unscaled kernel in `dim` dimensions. mq and w3.5
/// have no closed form in the catalog and return nullopt. The polyharmonic
/// generalized transform rho^{-2m} refers to d = 2.
inline std::optional<KernelSpectrum> spectrum(const RadialKernel& kernel, int dim = 2) {
  KernelSpectrum s;
  s.kernel = kernel.name();
  s.dim = dim;
  switch (kernel.family()) {
    case KernelFamily::gaussian: {
      const double log_c = -0.5 * dim * std::numbers::ln2;
      s.log_profile = [log_c](double rho) { return log_c - 0.25 * rho * rho; };
      s.sup = std::exp(log_c);
      s.exponential_decay = true;
      return s;
    }
    case KernelFamily::matern: {
      if (dim != kernel.dim()) return std::nullopt;
      const double m = *kernel.sobolev_m();
      s.log_profile = [m](double rho) { return -m * std::log1p(rho * rho); };
      s.sup = 1.0;
      return s;
    }
    case KernelFamily::polyharmonic: {
      if (dim != 2) return std::nullopt;
      const double m = *kernel.sobolev_m();
      s.log_profile = [m](double rho) { return -2.0 * m * std::log(rho); };
      s.sup = std::numeric_limits<double>::infinity();
      return s;
    }
    case KernelFamily::inverse_multiquadric:
    case KernelFamily::wendland:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace rbfscale
