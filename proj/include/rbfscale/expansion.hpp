#pragma once

// Small-eps expansion s(x; eps) = p_0(x) + eps^2 p_2(x) + eps^4 p_4(x) + ...
// of analytic-kernel interpolants, estimated by least squares over sampled
// scales, plus the sign test for improving on the flat limit and the
// two-extension construction showing the data alone cannot decide it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "format.hpp"
#include "interpolation.hpp"
#include "kernel.hpp"
#include "point_set.hpp"

namespace rbfscale {

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpansionOptions {
  double eps_min = 0.05;
  double eps_max = 0.4;
  int eps_count = 12;
  int J = 3;
  /// extra odd powers eps, eps^3, ... in the fit basis (adequacy check)
  int odd_terms = 0;
  double cond_limit = kDefaultConditionLimit;
};

inline std::vector<double> geometric_samples(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("expansion: bad eps range");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = count == 1 ? lo : lo * std::pow(hi / lo, double(i) / (count - 1));
  return out;
}

class ExpansionFit {
 public:
  ExpansionFit(std::vector<Interpolant> samples, std::vector<double> eps, std::vector<double> dropped,
               int J, int odd_terms, const PointSet& probes)
      : samples_(std::move(samples)), eps_(std::move(eps)), dropped_(std::move(dropped)),
        J_(J), odd_(odd_terms), probes_(probes) {
    const Eigen::Index s = Eigen::Index(eps_.size());
    const Eigen::Index cols = J_ + 1 + odd_;
    // columns in t = eps / eps_max keep the design matrix well scaled
    const double emax = *std::max_element(eps_.begin(), eps_.end());
    Eigen::MatrixXd v(s, cols);
    for (Eigen::Index i = 0; i < s; ++i) {
      const double t = eps_[i] / emax;
      for (int j = 0; j <= J_; ++j) v(i, j) = std::pow(t, 2 * j);
      for (int o = 0; o < odd_; ++o) v(i, J_ + 1 + o) = std::pow(t, 2 * o + 1);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    Eigen::MatrixXd w = qr.solve(Eigen::MatrixXd::Identity(s, s));
    for (int j = 0; j <= J_; ++j) w.row(j) /= std::pow(emax, 2 * j);
    for (int o = 0; o < odd_; ++o) w.row(J_ + 1 + o) /= std::pow(emax, 2 * o + 1);
    weights_ = w;
    design_ = v;

    const Eigen::Index p = probes_.size();
    coefficients_.resize(cols, p);
    residuals_.resize(p);
    scale_ = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      const Eigen::VectorXd vals = sample_values(probes_[k]);
      scale_ = std::max(scale_, vals.cwiseAbs().maxCoeff());
      coefficients_.col(k) = weights_ * vals;
      residuals_(k) = fit_residual(vals);
    }
    residual_ = p ? residuals_.maxCoeff() : 0.0;
  }

  int J() const { return J_; }
  int odd_terms() const { return odd_; }
  const std::vector<double>& eps_samples() const { return eps_; }
  const std::vector<double>& dropped_samples() const { return dropped_; }
  const PointSet& probes() const { return probes_; }
  const std::vector<Interpolant>& samples() const { return samples_; }
  /// Least-squares weights: term j at x is sum_i W(j, i) s(x; eps_i). Rows
  /// 0..J are the even powers, then the odd ones.
  const Eigen::MatrixXd& weights() const { return weights_; }
  /// (J + 1 + odd_terms) x probes
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  const Eigen::VectorXd& probe_residuals() const { return residuals_; }
  /// max over probes of the l_inf fit residual
  double residual() const { return residual_; }
  /// max |s(probe; eps)| over probes and samples
  double scale() const { return scale_; }

  Eigen::VectorXd sample_values(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    Eigen::VectorXd out(Eigen::Index(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) out(Eigen::Index(i)) = samples_[i](x);
    return out;
  }

  /// Estimated coefficient of eps^{2j} at an arbitrary point.
  double term(int j, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (j < 0 || j > J_) throw std::out_of_range("expansion: term index out of range");
    return weights_.row(j).dot(sample_values(x));
  }

  /// Coefficient of eps^{2o+1} in the augmented fit.
  double odd_term(int o, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (o < 0 || o >= odd_) throw std::out_of_range("expansion: odd term index out of range");
    return weights_.row(J_ + 1 + o).dot(sample_values(x));
  }

  double p0(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return term(0, x); }

  /// sum_{j=1}^J eps^{2j} p_{2j}(x)
  double perturbation(double eps, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    const Eigen::VectorXd vals = sample_values(x);
    double out = 0.0;
    for (int j = 1; j <= J_; ++j) out += std::pow(eps, 2 * j) * weights_.row(j).dot(vals);
    return out;
  }

  double eps_max() const { return *std::max_element(eps_.begin(), eps_.end()); }

  /// |eps_max^{2j} p_{2j}(x)|: the size of term j at the largest sampled
  /// scale, in the units of s and of the fit residual.
  double term_contribution(int j, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return std::pow(eps_max(), 2 * j) * std::abs(term(j, x));
  }

  /// Threshold below which a term contribution counts as zero.
  double vanishing_tolerance() const { return std::max(10.0 * residual_, 1e-7 * std::max(1.0, scale_)); }

  /// Smallest j >= 1 whose estimate is nonzero at some probe.
  std::optional<int> k_min() const {
    for (int j = 1; j <= J_; ++j)
      if (std::pow(eps_max(), 2 * j) * coefficients_.row(j).cwiseAbs().maxCoeff() > vanishing_tolerance())
        return j;
    return std::nullopt;
  }

 private:
  double fit_residual(const Eigen::VectorXd& vals) const {
    const Eigen::VectorXd c = weights_ * vals;
    // weights carry the 1/eps_max^k column scaling; undo it for the design
    const double emax = *std::max_element(eps_.begin(), eps_.end());
    Eigen::VectorXd cs = c;
    for (int j = 0; j <= J_; ++j) cs(j) *= std::pow(emax, 2 * j);
    for (int o = 0; o < odd_; ++o) cs(J_ + 1 + o) *= std::pow(emax, 2 * o + 1);
    return (design_ * cs - vals).cwiseAbs().maxCoeff();
  }

  std::vector<Interpolant> samples_;
  std::vector<double> eps_;
  std::vector<double> dropped_;
  int J_;
  int odd_;
  PointSet probes_;
  Eigen::MatrixXd weights_;
  Eigen::MatrixXd design_;
  Eigen::MatrixXd coefficients_;
  Eigen::VectorXd residuals_;
  double residual_ = 0.0;
  double scale_ = 0.0;
};

/// Samples whose system trips the gate are dropped; fewer than 2J+2
/// survivors (plus the odd terms) raise InsufficientSamples.
inline ExpansionFit fit_expansion(const RadialKernel& kernel, const PointSet& sites,
                                  const Eigen::VectorXd& values, const PointSet& probes,
                                  const std::vector<double>& eps_samples, int J, int odd_terms = 0,
                                  double cond_limit = kDefaultConditionLimit) {
  if (kernel.smoothness_class() != SmoothnessClass::analytic)
    throw std::invalid_argument("fit_expansion: kernel " + kernel.name() + " is not analytic");
  if (J < 0 || odd_terms < 0) throw std::invalid_argument("fit_expansion: negative term count");
  std::vector<Interpolant> kept;
  std::vector<double> eps, dropped;
  for (double e : eps_samples) {
    Interpolant s = solve(kernel, e, sites, values, cond_limit);
    if (s.ok()) {
      kept.push_back(std::move(s));
      eps.push_back(e);
    } else {
      dropped.push_back(e);
    }
  }
  const std::size_t need = std::size_t(2 * J + 2 + odd_terms);
  if (kept.size() < need)
    throw InsufficientSamples("fit_expansion: " + std::to_string(kept.size()) +
                              " usable eps samples, need " + std::to_string(need));
  return ExpansionFit(std::move(kept), std::move(eps), std::move(dropped), J, odd_terms, probes);
}

inline ExpansionFit fit_expansion(const RadialKernel& kernel, const PointSet& sites,
                                  const Eigen::VectorXd& values, const PointSet& probes,
                                  const ExpansionOptions& opt = {}) {
  return fit_expansion(kernel, sites, values, probes,
                       geometric_samples(opt.eps_min, opt.eps_max, opt.eps_count), opt.J,
                       opt.odd_terms, opt.cond_limit);
}

/// Rows (probe, j, coefficient, residual) for every probe and even term.
inline void write_expansion_csv(std::ostream& os, const ExpansionFit& fit) {
  os << "probe,j,coefficient,residual\n";
  for (Eigen::Index k = 0; k < fit.probes().size(); ++k) {
    std::string probe;
    for (int c = 0; c < fit.probes().dim(); ++c)
      probe += (c ? " " : "") + format_double(fit.probes()[k](c));
    for (int j = 0; j <= fit.J(); ++j)
      os << probe << ',' << j << ',' << format_double(fit.coefficients()(j, k)) << ','
         << format_double(fit.probe_residuals()(k)) << '\n';
  }
}

using ScalarFunction = std::function<double(double)>;

/// Points of [lo, hi] where |g| is maximal: a dense scan of `samples`
/// points, golden-section refinement of each local maximum, and every
/// refined point within `tie` (relative) of the overall maximum.
inline std::vector<double> extremal_points(const ScalarFunction& g, double lo, double hi,
                                           int samples = 10000, double tie = 1e-12) {
  if (!(hi > lo) || samples < 3) throw std::invalid_argument("extremal_points: bad interval");
  std::vector<double> xs(samples), vs(samples);
  for (int i = 0; i < samples; ++i) {
    xs[i] = lo + (hi - lo) * i / (samples - 1);
    vs[i] = std::abs(g(xs[i]));
  }
  std::vector<std::pair<double, double>> cands;
  for (int i = 0; i < samples; ++i) {
    const bool left = i == 0 || vs[i] >= vs[i - 1];
    const bool right = i == samples - 1 || vs[i] >= vs[i + 1];
    if (!(left && right)) continue;
    double a = xs[std::max(i - 1, 0)], b = xs[std::min(i + 1, samples - 1)];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double c = b - gr * (b - a), d = a + gr * (b - a);
      if (std::abs(g(c)) >= std::abs(g(d))) b = d;
      else a = c;
    }
    double x = 0.5 * (a + b);
    double v = std::abs(g(x));
    if (vs[i] > v) {
      x = xs[i];
      v = vs[i];
    }
    cands.emplace_back(x, v);
  }
  double best = 0.0;
  for (const auto& c : cands) best = std::max(best, c.second);
  std::vector<double> out;
  for (const auto& c : cands)
    if (c.second >= best * (1.0 - tie) &&
        (out.empty() || std::abs(c.first - out.back()) > 1e-9 * (hi - lo)))
      out.push_back(c.first);
  return out;
}

enum class FlatLimitVerdict { improvable, not_improvable, flat_limit_exact };

inline std::string to_string(FlatLimitVerdict v) {
  switch (v) {
    case FlatLimitVerdict::improvable: return "improvable";
    case FlatLimitVerdict::not_improvable: return "not improvable";
    case FlatLimitVerdict::flat_limit_exact: return "flat-limit-exact";
  }
  return "?";
}

struct SignCheck {
  double x = 0.0;
  /// sgn(p_0(x) - f(x))
  double sigma = 0.0;
  /// sigma(x) * sum_{j>=1} eps^{2j} p_{2j}(x)
  double value = 0.0;
  bool negative = false;
};

struct SignCriterion {
  FlatLimitVerdict verdict = FlatLimitVerdict::flat_limit_exact;
  double eps = 0.0;
  double flat_limit_error = 0.0;
  std::vector<SignCheck> checks;
};

/// A positive eps can beat the flat limit only where the perturbation has
/// the opposite sign of p_0 - f; the verdict is "improvable" iff that holds
/// at every extremal point of p_0 - f on the 1D hull of the sites.
inline SignCriterion sign_criterion(const ExpansionFit& fit, const ScalarFunction& truth, double eps,
                                    double exact_tol = 1e-10) {
  if (fit.probes().dim() != 1 && fit.samples().front().sites().dim() != 1)
    throw std::invalid_argument("sign_criterion: one-dimensional sites only");
  const auto& x = fit.samples().front().sites().sites();
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  auto at = [](double t) { return Eigen::RowVectorXd::Constant(1, t); };
  const ScalarFunction err = [&](double t) { return fit.p0(at(t)) - truth(t); };

  SignCriterion out;
  out.eps = eps;
  // extremal values of an estimated function tie only up to its noise
  double peak = 0.0;
  for (int i = 0; i <= 1000; ++i) peak = std::max(peak, std::abs(err(lo + (hi - lo) * i / 1000)));
  const double tie = peak > 0.0 ? std::max(1e-12, 10.0 * fit.residual() / peak) : 1e-12;
  const auto ext = extremal_points(err, lo, hi, 10000, tie);
  for (double t : ext) out.flat_limit_error = std::max(out.flat_limit_error, std::abs(err(t)));
  if (out.flat_limit_error <= exact_tol * std::max(1.0, fit.scale())) {
    out.verdict = FlatLimitVerdict::flat_limit_exact;
    return out;
  }
  bool all_negative = true;
  for (double t : ext) {
    SignCheck c;
    c.x = t;
    const double e = err(t);
    c.sigma = e > 0 ? 1.0 : (e < 0 ? -1.0 : 0.0);
    c.value = c.sigma * fit.perturbation(eps, at(t));
    c.negative = c.value < 0.0;
    all_negative = all_negative && c.negative;
    out.checks.push_back(c);
  }
  out.verdict = all_negative ? FlatLimitVerdict::improvable : FlatLimitVerdict::not_improvable;
  return out;
}

struct ErrorScan {
  std::vector<double> eps;
  std::vector<double> error;
  std::size_t argmin = 0;
  /// minimum at the smallest usable scanned eps
  bool flat_side = true;
};

/// max |s_eps - f| over a dense 1D grid for every eps whose system passes the gate.
inline ErrorScan error_scan(const RadialKernel& kernel, const PointSet& sites, const Eigen::VectorXd& values,
                            const ScalarFunction& truth, const std::vector<double>& eps_grid,
                            int dense = 2001, double cond_limit = kDefaultConditionLimit) {
  const auto& x = sites.sites();
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  ErrorScan scan;
  for (double e : eps_grid) {
    const Interpolant s = solve(kernel, e, sites, values, cond_limit);
    if (!s.ok()) continue;
    double worst = 0.0;
    for (int i = 0; i < dense; ++i) {
      const double t = lo + (hi - lo) * i / (dense - 1);
      worst = std::max(worst, std::abs(s(Eigen::RowVectorXd::Constant(1, t)) - truth(t)));
    }
    scan.eps.push_back(e);
    scan.error.push_back(worst);
  }
  if (scan.eps.empty()) throw InsufficientSamples("error_scan: no eps passes the condition gate");
  scan.argmin = std::size_t(std::min_element(scan.error.begin(), scan.error.end()) - scan.error.begin());
  scan.flat_side = scan.argmin == 0;
  return scan;
}

struct ExtensionReport {
  /// +1 for f = p_0 + p_{2k}, -1 for f = p_0 - p_{2k}
  int sign = 0;
  SignCriterion criterion;
  ErrorScan scan;
};

struct ExtensionStudy {
  std::optional<int> k_min;
  bool inconclusive = false;
  bool flat_limit_exact = false;
  /// false for J = 0 fits, which only estimate p_0
  bool higher_terms_available = true;
  double residual = 0.0;
  std::vector<ExtensionReport> extensions;

  /// the two extensions disagree under both the sign test and the scan
  bool opposite_verdicts() const {
    if (extensions.size() != 2) return false;
    const auto& a = extensions[0];
    const auto& b = extensions[1];
    return a.criterion.verdict != b.criterion.verdict &&
           a.criterion.verdict != FlatLimitVerdict::flat_limit_exact &&
           b.criterion.verdict != FlatLimitVerdict::flat_limit_exact &&
           a.scan.flat_side != b.scan.flat_side &&
           (a.criterion.verdict == FlatLimitVerdict::improvable) == !a.scan.flat_side &&
           (b.criterion.verdict == FlatLimitVerdict::improvable) == !b.scan.flat_side;
  }
};

struct ExtensionOptions {
  ExpansionOptions fit;
  /// scale used in the sign test (small, on the flat side)
  std::optional<double> criterion_eps;
  double scan_min = 0.05;
  double scan_max = 2.0;
  int scan_count = 40;
};

/// Fixes the data, estimates p_0 and the first nonvanishing p_{2k}, and
/// builds the two extensions p_0 + p_{2k} and p_0 - p_{2k}. Both take the
/// data values on the sites, yet only one of them is improved by small
/// positive scales.
inline ExtensionStudy extension_demo(const PointSet& sites, const Eigen::VectorXd& values,
                                      const RadialKernel& kernel, const ExtensionOptions& opt = {}) {
  if (sites.dim() != 1) throw std::invalid_argument("extension_demo: one-dimensional sites only");
  const auto& x = sites.sites();
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  const int np = 7;
  Eigen::MatrixXd pr(np, 1);
  for (int i = 0; i < np; ++i) pr(i, 0) = lo + (hi - lo) * i / (np - 1);
  const ExpansionFit fit = fit_expansion(kernel, sites, values, PointSet(pr, "probes"), opt.fit);

  ExtensionStudy report;
  report.residual = fit.residual();
  report.k_min = fit.k_min();
  report.higher_terms_available = fit.J() > 0;
  if (!report.k_min) {
    // all higher terms vanish: exact for data of a flat-limit polynomial
    // (zero data in particular), otherwise J was too small to see k_min
    report.flat_limit_exact = report.higher_terms_available;
    report.inconclusive = !report.flat_limit_exact;
    return report;
  }
  const int k = *report.k_min;
  const double crit_eps = opt.criterion_eps.value_or(fit.eps_samples().front());
  const std::vector<double> grid = geometric_samples(opt.scan_min, opt.scan_max, opt.scan_count);
  for (int sign : {+1, -1}) {
    ExtensionReport ext;
    ext.sign = sign;
    const ScalarFunction f = [&fit, k, sign](double t) {
      const Eigen::RowVectorXd p = Eigen::RowVectorXd::Constant(1, t);
      return fit.p0(p) + sign * fit.term(k, p);
    };
    ext.criterion = sign_criterion(fit, f, crit_eps);
    ext.scan = error_scan(kernel, sites, values, f, grid, 2001, opt.fit.cond_limit);
    report.extensions.push_back(std::move(ext));
  }
  return report;
}

inline void write_extension_report(std::ostream& os, const ExtensionStudy& r) {
  os << "fit residual: " << format_double(r.residual) << '\n';
  if (!r.higher_terms_available) {
    os << "higher terms: unavailable (J = 0, p0 only)\n";
    os << "verdict: inconclusive\n";
    return;
  }
  if (!r.k_min) {
    os << "k_min: none within J\n";
    os << "verdict: " << (r.flat_limit_exact ? "flat-limit-exact" : "inconclusive") << '\n';
    return;
  }
  os << "k_min: " << *r.k_min << '\n';
  for (const auto& e : r.extensions) {
    os << "extension f = p0 " << (e.sign > 0 ? '+' : '-') << " p" << 2 * *r.k_min << ":\n";
    os << "  sign criterion at eps=" << format_double(e.criterion.eps) << ": "
       << to_string(e.criterion.verdict) << '\n';
    for (const auto& c : e.criterion.checks)
      os << "    extremal x=" << format_double(c.x) << " sigma*perturbation=" << format_double(c.value) << '\n';
    os << "  error scan: min " << format_double(e.scan.error[e.scan.argmin]) << " at eps="
       << format_double(e.scan.eps[e.scan.argmin]) << " ("
       << (e.scan.flat_side ? "flat side" : "positive eps") << "), flat-side error "
       << format_double(e.scan.error.front()) << '\n';
  }
  os << "opposite verdicts: " << (r.opposite_verdicts() ? "yes" : "no") << '\n';
}

}  // namespace rbfscale
