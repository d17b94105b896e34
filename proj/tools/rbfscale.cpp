// rbfscale: scale sweeps, self-verification and flat-limit expansion studies.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 numerical insufficiency.

#include <CLI11.hpp>

#include <rbfscale/config.hpp>
#include <rbfscale/expansion.hpp>
#include <rbfscale/sweep.hpp>
#include <rbfscale/verify.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rbfscale;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr int kInsufficient = 3;

struct FlagSet {
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  std::string config_file;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    opts[key] = app->add_option("--" + key, raw[key], help);
  }

  RunConfig collect(const std::string& command) const {
    RunConfig file;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read config file '" + config_file + "'");
      file = parse_config(in);
    }
    RunConfig flags;
    flags.command = command;
    for (const auto& [key, opt] : opts)
      if (opt->count()) set_config_value(flags, key, resolve(key, raw.at(key)));
    RunConfig out = merge(file, flags);
    if (out.command && *out.command != command)
      throw ConfigError("config file is for command '" + *out.command + "'");
    return out;
  }

  // --sites and --values take an inline list or a file of numbers
  static std::string resolve(const std::string& key, const std::string& value) {
    if ((key == "sites" || key == "values") && std::filesystem::is_regular_file(value)) {
      std::ifstream in(value);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
    return value;
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  file.open(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  return file;
}

int cmd_sweep(const RunConfig& cfg) {
  SweepConfig sc = sweep_config(cfg);
  const auto records = run_sweep(sc);

  RunConfig echo = cfg;
  echo.out.reset();
  echo.out_dir.reset();
  echo.threads.reset();
  echo.kernels = sc.kernels;
  echo.functions = sc.functions;
  echo.grid = sc.grid;
  echo.eps_min = sc.eps.front();
  echo.eps_max = sc.eps.back();
  echo.eps_count = int(sc.eps.size());
  echo.log = cfg.log.value_or(true);
  echo.cond_limit = sc.cond_limit;
  std::vector<std::string> meta{"cond_limit=" + format_double(sc.cond_limit)};
  std::istringstream lines(canonical_text(echo));
  for (std::string line; std::getline(lines, line);) meta.push_back("config " + line);

  if (cfg.out) {
    std::ofstream file;
    write_sweep_csv(open_output(*cfg.out, file), records, meta);
    if (*cfg.out != "-") std::cerr << "wrote " << *cfg.out << '\n';
    return kOk;
  }
  const std::string dir = cfg.out_dir.value_or(".");
  for (const auto& f : sc.functions) {
    std::vector<SweepRecord> part;
    for (const auto& r : records)
      if (r.function == f) part.push_back(r);
    const std::string path = (std::filesystem::path(dir) / ("sweep_" + f + "_grid" + std::to_string(sc.grid) + ".csv")).string();
    std::ofstream file;
    write_sweep_csv(open_output(path, file), part, meta);
    std::cerr << "wrote " << path << '\n';
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto results = run_verify(KernelCatalog{}, cfg.suite.value_or(std::vector<std::string>{}));
  write_verify_report(std::cout, results);
  const bool ok = all_passed(results);
  std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerifyFailed;
}

int cmd_expand(const RunConfig& cfg) {
  if (!cfg.sites) throw ConfigError("missing --sites");
  if (!cfg.values) throw ConfigError("missing --values");
  if (cfg.sites->size() != cfg.values->size())
    throw ConfigError("--sites has " + std::to_string(cfg.sites->size()) + " entries, --values has " +
                      std::to_string(cfg.values->size()));
  if (cfg.sites->empty()) throw ConfigError("--sites is empty");
  const std::string kname = cfg.kernel.value_or("g");
  if (kname != "g" && kname != "mq") throw ConfigError("--kernel must be an analytic kernel (g or mq), got '" + kname + "'");
  const RadialKernel kernel = RadialKernel::from_name(kname).with_pre_scale(1.0);
  ExpansionOptions opt;
  opt.J = cfg.J.value_or(opt.J);
  if (opt.J < 0) throw ConfigError("--J must be non-negative");
  opt.eps_min = cfg.eps_min.value_or(opt.eps_min);
  opt.eps_max = cfg.eps_max.value_or(opt.eps_max);
  opt.eps_count = cfg.eps_count.value_or(opt.eps_count);
  if (cfg.cond_limit) opt.cond_limit = *cfg.cond_limit;
  if (!(opt.eps_min > 0.0) || !(opt.eps_max >= opt.eps_min) || opt.eps_count < 1)
    throw ConfigError("need 0 < eps-min <= eps-max and eps-count >= 1");

  const PointSet sites = PointSet::on_line(*cfg.sites);
  if (sites.min_pairwise_distance() <= 0.0) throw ConfigError("--sites contains duplicates");
  const Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(cfg.values->data(), Eigen::Index(cfg.values->size()));
  const double lo = sites.sites().minCoeff(), hi = sites.sites().maxCoeff();
  const int np = 7;
  Eigen::MatrixXd pr(np, 1);
  for (int i = 0; i < np; ++i) pr(i, 0) = sites.size() > 1 ? lo + (hi - lo) * i / (np - 1) : lo;

  const ExpansionFit fit = fit_expansion(kernel, sites, values, PointSet(pr, "probes"), opt);
  std::ofstream file;
  const std::string out = cfg.out.value_or("expansion.csv");
  write_expansion_csv(open_output(out, file), fit);

  std::ostream& os = std::cout;
  os << "kernel " << kname << " (unit pre-scale), " << fit.eps_samples().size() << " eps samples in ["
     << format_double(opt.eps_min) << ", " << format_double(opt.eps_max) << "], " << fit.dropped_samples().size()
     << " dropped by the condition gate, J=" << fit.J() << '\n';
  os << "probe p0";
  for (int j = 1; j <= fit.J(); ++j) os << " p" << 2 * j;
  os << '\n';
  for (int i = 0; i < np; ++i) {
    os << format_double(pr(i, 0));
    for (int j = 0; j <= fit.J(); ++j) os << ' ' << format_double(fit.coefficients()(j, i));
    os << '\n';
  }
  if (sites.size() > 1) {
    ExtensionOptions topt;
    topt.fit = opt;
    write_extension_report(os, extension_demo(sites, values, kernel, topt));
  } else {
    os << "single site: no extension study\n";
  }
  if (out != "-") std::cerr << "wrote " << out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaled kernel interpolation laboratory"};
  app.require_subcommand(1);

  FlagSet sweep_flags, verify_flags, expand_flags;

  auto* sweep = app.add_subcommand("sweep", "eps sweep over kernels and functions on a regular grid");
  sweep->add_option("--config", sweep_flags.config_file, "key=value file; flags override it");
  sweep_flags.add(sweep, "kernels", "comma list from g,mq,ms3,w3.5");
  sweep_flags.add(sweep, "functions", "comma list from runge_good,runge_bad,r3,linf");
  sweep_flags.add(sweep, "grid", "11 or 21");
  sweep_flags.add(sweep, "eps-min", "smallest eps (default 1e-2)");
  sweep_flags.add(sweep, "eps-max", "largest eps (default 10)");
  sweep_flags.add(sweep, "eps-count", "number of eps values (default 40)");
  sweep_flags.add(sweep, "cond-limit", "condition gate (default 1e14)");
  sweep_flags.add(sweep, "out", "single CSV file for all functions, '-' for stdout");
  sweep_flags.add(sweep, "out-dir", "directory for one CSV per function (default .)");
  sweep_flags.add(sweep, "threads", "worker threads (default: all cores)");
  bool log_flag = true;
  auto* log_opt = sweep->add_flag("--log,!--linear", log_flag, "log-spaced eps grid (default) or uniform");

  auto* verify = app.add_subcommand("verify", "run the invariance and scaling suites");
  verify->add_option("--config", verify_flags.config_file, "key=value file; flags override it");
  verify_flags.add(verify, "suite", "comma list of suites to run");

  auto* expand = app.add_subcommand("expand", "small-eps expansion and flat-limit sign study in 1D");
  expand->add_option("--config", expand_flags.config_file, "key=value file; flags override it");
  expand_flags.add(expand, "sites", "1D sites: inline comma list or a file of numbers");
  expand_flags.add(expand, "values", "data values: inline comma list or a file of numbers");
  expand_flags.add(expand, "kernel", "g or mq (default g)");
  expand_flags.add(expand, "J", "highest even power index (default 3)");
  expand_flags.add(expand, "eps-min", "smallest sample eps (default 0.05)");
  expand_flags.add(expand, "eps-max", "largest sample eps (default 0.4)");
  expand_flags.add(expand, "eps-count", "number of samples (default 12)");
  expand_flags.add(expand, "cond-limit", "condition gate (default 1e14)");
  expand_flags.add(expand, "out", "expansion CSV path (default expansion.csv), '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sweep) {
      RunConfig cfg = sweep_flags.collect("sweep");
      if (log_opt->count()) cfg.log = log_flag;
      return cmd_sweep(cfg);
    }
    if (*verify) return cmd_verify(verify_flags.collect("verify"));
    if (*expand) return cmd_expand(expand_flags.collect("expand"));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InsufficientSamples& e) {
    std::cerr << "numerical insufficiency: " << e.what() << '\n';
    return kInsufficient;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kConfigError;
}
