#pragma once

// Scale sweeps over the kernel x function x eps grid on [-1,1]^2, with the
// scale-free baselines (p, ph3, ph4) as eps = 0 rows, and the CSV contract.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "flat_limit.hpp"
#include "format.hpp"
#include "interpolation.hpp"
#include "kernel.hpp"
#include "norms.hpp"
#include "point_set.hpp"
#include "power_function.hpp"
#include "test_functions.hpp"

namespace rbfscale {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kSweepCsvHeader =
    "experiment_id,kernel,function,n_sites,epsilon,linf_error,native_norm,power_sup,"
    "bound_product,cond_estimate,status";

/// count points from lo to hi, geometric if `log` else uniform.
inline std::vector<double> eps_grid(double lo, double hi, int count, bool log = true) {
  if (count < 1) throw ConfigError("eps grid: count must be positive");
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("eps grid: need 0 < eps-min <= eps-max");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double t = double(i) / (count - 1);
    out[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  out.back() = hi;
  return out;
}

inline std::vector<double> default_eps_grid() { return eps_grid(1e-2, 1e1, 40, true); }

inline const std::vector<std::string>& sweep_kernel_names() {
  static const std::vector<std::string> names{"g", "mq", "ms3", "w3.5"};
  return names;
}

struct SweepConfig {
  std::vector<std::string> kernels = sweep_kernel_names();
  std::vector<std::string> functions{"runge_good", "runge_bad", "r3", "linf"};
  int grid = 11;
  std::vector<double> eps = default_eps_grid();
  double cond_limit = kDefaultConditionLimit;
  bool baselines = true;
  /// 0 picks the hardware concurrency
  int threads = 0;
  /// defaults to "grid<k>"
  std::string experiment_id;
};

struct SweepRecord {
  std::string experiment_id;
  std::string kernel;
  std::string function;
  long n_sites = 0;
  double epsilon = 0.0;
  std::optional<double> linf_error;
  std::optional<double> native_norm;
  std::optional<double> power_sup;
  std::optional<double> bound_product;
  std::optional<double> cond_estimate;
  std::string status;
};

/// The plotted proxy |P|_inf * |s|; not an upper bound for the error of f.
inline std::optional<double> bound_product(std::optional<double> power_sup,
                                           std::optional<double> native_norm) {
  if (!power_sup || !native_norm) return std::nullopt;
  if (!std::isfinite(*power_sup) || !std::isfinite(*native_norm)) return std::nullopt;
  return *power_sup * *native_norm;
}

inline double bound_product(double power_sup, double native_norm) { return power_sup * native_norm; }

namespace detail {

inline std::optional<double> finite_or_empty(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Task>
void run_indexed(std::size_t count, int threads, Task&& task) {
  std::size_t workers = threads > 0 ? std::size_t(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Records ordered by function (config order), then the p/ph3/ph4 baselines,
/// then kernel (config order) and eps (config order). Rows past the
/// conditioning cliff carry the status and the condition estimate only.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.grid < 2) throw ConfigError("grid must be at least 2");
  if (config.eps.empty()) throw ConfigError("empty eps grid");
  for (double e : config.eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive");
  if (!(config.cond_limit >= 1.0)) throw ConfigError("cond-limit must be at least 1");

  std::vector<RadialKernel> kernels;
  for (const auto& name : config.kernels) {
    if (std::find(sweep_kernel_names().begin(), sweep_kernel_names().end(), name) ==
        sweep_kernel_names().end())
      throw ConfigError("unknown kernel '" + name + "'");
    kernels.push_back(RadialKernel::from_name(name));
  }
  std::vector<TestFunction> functions;
  for (const auto& name : config.functions) {
    try {
      functions.push_back(test_function(name));
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown function '" + name + "'");
    }
  }

  const PointSet sites = PointSet::regular_grid(config.grid);
  const PointSet mids = PointSet::midpoint_grid(config.grid);
  const std::string id =
      config.experiment_id.empty() ? "grid" + std::to_string(config.grid) : config.experiment_id;
  const long n = long(sites.size());
  const std::size_t nf = functions.size(), ne = config.eps.size();

  std::vector<Eigen::VectorXd> data, truth;
  for (const auto& f : functions) {
    data.push_back(f.on(sites));
    truth.push_back(f.on(mids));
  }

  auto blank = [&](const std::string& kernel, const std::string& function, double eps) {
    SweepRecord r;
    r.experiment_id = id;
    r.kernel = kernel;
    r.function = function;
    r.n_sites = n;
    r.epsilon = eps;
    return r;
  };

  // kernel rows: slot [(k * ne + e) * nf + f]
  std::vector<SweepRecord> rows(kernels.size() * ne * nf);
  detail::run_indexed(kernels.size() * ne, config.threads, [&](std::size_t task) {
    const std::size_t k = task / ne, e = task % ne;
    const double eps = config.eps[e];
    const auto system = std::make_shared<const KernelSystem>(kernels[k], eps, sites, config.cond_limit);
    std::optional<double> psup;
    if (system->ok()) psup = power_on_grid(*system, mids).sup;
    for (std::size_t f = 0; f < nf; ++f) {
      SweepRecord r = blank(config.kernels[k], functions[f].label, eps);
      r.cond_estimate = detail::finite_or_empty(system->condition());
      r.status = to_string(system->status());
      if (system->ok()) {
        const Interpolant s = solve(system, data[f]);
        r.linf_error = (evaluate(s, mids) - truth[f]).cwiseAbs().maxCoeff();
        r.native_norm = native_norm_of_interpolant(s);
        r.power_sup = psup;
        r.bound_product = bound_product(r.power_sup, r.native_norm);
      }
      rows[task * nf + f] = std::move(r);
    }
  });

  // baselines: slot [f * 3 + b]
  std::vector<SweepRecord> base;
  if (config.baselines) {
    base.resize(nf * 3);
    std::vector<std::shared_ptr<const KernelSystem>> ph;
    for (int m : {3, 4})
      ph.push_back(std::make_shared<const KernelSystem>(RadialKernel::polyharmonic(m), 1.0, sites,
                                                        config.cond_limit));
    detail::run_indexed(nf * 3, config.threads, [&](std::size_t task) {
      const std::size_t f = task / 3, b = task % 3;
      SweepRecord r = blank(b == 0 ? "p" : "ph" + std::to_string(b + 2), functions[f].label, 0.0);
      if (b == 0) {
        const PolynomialFit fit = fit_polynomial(sites, data[f], mids, truth[f]);
        r.linf_error = fit.error;
        r.status = "baseline";
      } else {
        const auto& system = ph[b - 1];
        r.cond_estimate = detail::finite_or_empty(system->condition());
        if (system->ok()) {
          const Interpolant s = solve(system, data[f]);
          r.linf_error = (evaluate(s, mids) - truth[f]).cwiseAbs().maxCoeff();
          r.native_norm = native_norm_of_interpolant(s);
          r.status = "baseline";
        } else {
          r.status = to_string(system->status());
        }
      }
      base[task] = std::move(r);
    });
  }

  std::vector<SweepRecord> out;
  out.reserve(rows.size() + base.size());
  for (std::size_t f = 0; f < nf; ++f) {
    if (config.baselines)
      for (std::size_t b = 0; b < 3; ++b) out.push_back(base[f * 3 + b]);
    for (std::size_t k = 0; k < kernels.size(); ++k)
      for (std::size_t e = 0; e < ne; ++e) out.push_back(rows[(k * ne + e) * nf + f]);
  }
  return out;
}

namespace detail {
inline std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
}  // namespace detail

inline void write_sweep_row(std::ostream& os, const SweepRecord& r) {
  os << r.experiment_id << ',' << r.kernel << ',' << r.function << ',' << r.n_sites << ','
     << format_double(r.epsilon) << ',' << detail::csv_field(r.linf_error) << ','
     << detail::csv_field(r.native_norm) << ',' << detail::csv_field(r.power_sup) << ','
     << detail::csv_field(r.bound_product) << ',' << detail::csv_field(r.cond_estimate) << ','
     << r.status << '\n';
}

/// Metadata lines are written verbatim after "# "; then header and rows.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                            const std::vector<std::string>& metadata = {}) {
  for (const auto& m : metadata) os << "# " << m << '\n';
  os << kSweepCsvHeader << '\n';
  for (const auto& r : records) write_sweep_row(os, r);
}

/// Reads the CSV contract back; '#' lines are skipped. Throws
/// std::runtime_error naming the offending line.
inline std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::vector<SweepRecord> out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("sweep csv line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSweepCsvHeader) fail("unexpected header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 11) fail("expected 11 fields, got " + std::to_string(cells.size()));
    auto opt = [&](const std::string& c) -> std::optional<double> {
      if (c.empty()) return std::nullopt;
      try {
        return parse_double(c);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      return std::nullopt;
    };
    SweepRecord r;
    r.experiment_id = cells[0];
    r.kernel = cells[1];
    r.function = cells[2];
    try {
      r.n_sites = parse_int(cells[3]);
      r.epsilon = parse_double(cells[4]);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    r.linf_error = opt(cells[5]);
    r.native_norm = opt(cells[6]);
    r.power_sup = opt(cells[7]);
    r.bound_product = opt(cells[8]);
    r.cond_estimate = opt(cells[9]);
    r.status = cells[10];
    out.push_back(std::move(r));
  }
  if (!header_seen) throw std::runtime_error("sweep csv: missing header");
  return out;
}

}  // namespace rbfscale
