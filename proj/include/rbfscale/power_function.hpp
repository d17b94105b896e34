#pragma once

// Power function P_{X,Phi_eps}(x)^2 = phi_eps(0) - b(x)^T A^{-1} b(x) for
// positive definite kernels, evaluated through the system's Cholesky factor.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "interpolation.hpp"

namespace rbfscale {

struct PowerValue {
  double value = 0.0;
  /// P^2 came out below -1e-10 phi_eps(0) before clamping
  bool conditioning_warning = false;
};

inline PowerValue power_value(const KernelSystem& system,
                              const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  if (!system.kernel().positive_definite())
    throw std::invalid_argument("power function: positive definite kernels only");
  const double phi0 = system.kernel()(0.0);
  const double p2 = phi0 - system.inverse_quadratic_form(system.kernel_vector(x));
  PowerValue out;
  out.conditioning_warning = p2 < -1e-10 * phi0;
  out.value = std::sqrt(std::max(p2, 0.0));
  return out;
}

inline double power_at(const KernelSystem& system, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  return power_value(system, x).value;
}

inline double power_at(const RadialKernel& kernel, double eps, const PointSet& sites,
                       const Eigen::Ref<const Eigen::RowVectorXd>& x,
                       double cond_limit = kDefaultConditionLimit) {
  return power_at(KernelSystem(kernel, eps, sites, cond_limit), x);
}

struct PowerEvaluation {
  SolveStatus status = SolveStatus::ok;
  Eigen::VectorXd values;
  double sup = 0.0;
  int warnings = 0;
};

/// P at every grid point plus the maximum; the experiments use cell midpoints.
inline PowerEvaluation power_on_grid(const KernelSystem& system, const PointSet& grid) {
  PowerEvaluation out;
  out.status = system.status();
  if (!system.ok()) return out;
  out.values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const PowerValue p = power_value(system, grid[i]);
    out.values(i) = p.value;
    out.warnings += p.conditioning_warning;
  }
  out.sup = grid.size() ? out.values.maxCoeff() : 0.0;
  return out;
}

inline double power_sup(const KernelSystem& system, const PointSet& grid) {
  const PowerEvaluation e = power_on_grid(system, grid);
  if (e.status != SolveStatus::ok)
    throw std::runtime_error("power_sup: system status " + to_string(e.status));
  return e.sup;
}

inline double power_sup(const RadialKernel& kernel, double eps, const PointSet& sites,
                        const PointSet& grid, double cond_limit = kDefaultConditionLimit) {
  return power_sup(KernelSystem(kernel, eps, sites, cond_limit), grid);
}

/// Expected algebraic decay exponent of F_Phi(h): beta/2 - d/2 (m - d/2 for
/// Sobolev kernels); 0 marks exponential decay.
inline double power_decay_exponent(const RadialKernel& kernel, int dim = 2) {
  if (kernel.smoothness_class() == SmoothnessClass::analytic) return 0.0;
  return 0.5 * kernel.beta() - 0.5 * dim;
}

}  // namespace rbfscale
