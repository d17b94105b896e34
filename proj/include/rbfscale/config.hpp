#pragma once

// Run configuration: a plain key=value text form shared by --config files
// and command-line flags. Keys are the long flag names without dashes.

#include <algorithm>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "format.hpp"
#include "sweep.hpp"

namespace rbfscale {

struct RunConfig {
  std::optional<std::string> command;
  std::optional<std::vector<std::string>> kernels;
  std::optional<std::vector<std::string>> functions;
  std::optional<int> grid;
  std::optional<double> eps_min;
  std::optional<double> eps_max;
  std::optional<int> eps_count;
  std::optional<bool> log;
  std::optional<double> cond_limit;
  std::optional<std::string> out;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::vector<std::string>> suite;
  std::optional<std::vector<double>> sites;
  std::optional<std::vector<double>> values;
  std::optional<std::string> kernel;
  std::optional<int> J;

  bool operator==(const RunConfig&) const = default;
};

/// Every accepted key, in canonical order.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command", "kernels", "functions", "grid",  "eps-min", "eps-max", "eps-count", "log",    "cond-limit",
      "out",     "out-dir", "threads",   "suite", "sites",   "values",  "kernel",    "J"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> parse_number_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string normalized = v;
  std::replace_if(normalized.begin(), normalized.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n'; }, ',');
  for (const auto& item : split_list(normalized)) {
    try {
      out.push_back(parse_double(item));
    } catch (const std::invalid_argument&) {
      throw ConfigError("config key '" + key + "': not a number: '" + item + "'");
    }
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, double>) out += format_double(items[i]);
    else out += items[i];
  }
  return out;
}

}  // namespace detail

/// Sets one key from its text value; throws ConfigError naming the key.
inline void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = detail::trim(raw);
  auto number = [&]() {
    try {
      return parse_double(v);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
  };
  auto integer = [&]() {
    try {
      return parse_int(v);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
  };
  if (key == "command") c.command = v;
  else if (key == "kernels") c.kernels = detail::split_list(v);
  else if (key == "functions") c.functions = detail::split_list(v);
  else if (key == "grid") c.grid = integer();
  else if (key == "eps-min") c.eps_min = number();
  else if (key == "eps-max") c.eps_max = number();
  else if (key == "eps-count") c.eps_count = integer();
  else if (key == "log") {
    if (v == "true" || v == "1") c.log = true;
    else if (v == "false" || v == "0") c.log = false;
    else throw ConfigError("config key 'log': expected true or false, got '" + v + "'");
  } else if (key == "cond-limit") c.cond_limit = number();
  else if (key == "out") c.out = v;
  else if (key == "out-dir") c.out_dir = v;
  else if (key == "threads") c.threads = integer();
  else if (key == "suite") c.suite = detail::split_list(v);
  else if (key == "sites") c.sites = detail::parse_number_list(key, v);
  else if (key == "values") c.values = detail::parse_number_list(key, v);
  else if (key == "kernel") c.kernel = v;
  else if (key == "J") c.J = integer();
  else throw ConfigError("unknown config key '" + key + "'");
}

/// key=value lines; blank lines and lines starting with '#' are ignored.
inline RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    set_config_value(c, detail::trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

/// Set keys only, one per line, in config_keys() order.
inline std::string canonical_text(const RunConfig& c) {
  std::ostringstream os;
  auto put = [&](const char* key, const std::string& v) { os << key << '=' << v << '\n'; };
  if (c.command) put("command", *c.command);
  if (c.kernels) put("kernels", detail::join(*c.kernels));
  if (c.functions) put("functions", detail::join(*c.functions));
  if (c.grid) put("grid", std::to_string(*c.grid));
  if (c.eps_min) put("eps-min", format_double(*c.eps_min));
  if (c.eps_max) put("eps-max", format_double(*c.eps_max));
  if (c.eps_count) put("eps-count", std::to_string(*c.eps_count));
  if (c.log) put("log", *c.log ? "true" : "false");
  if (c.cond_limit) put("cond-limit", format_double(*c.cond_limit));
  if (c.out) put("out", *c.out);
  if (c.out_dir) put("out-dir", *c.out_dir);
  if (c.threads) put("threads", std::to_string(*c.threads));
  if (c.suite) put("suite", detail::join(*c.suite));
  if (c.sites) put("sites", detail::join(*c.sites));
  if (c.values) put("values", detail::join(*c.values));
  if (c.kernel) put("kernel", *c.kernel);
  if (c.J) put("J", std::to_string(*c.J));
  return os.str();
}

/// Values set in `over` replace those in `base`.
inline RunConfig merge(RunConfig base, const RunConfig& over) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.command, over.command);
  take(base.kernels, over.kernels);
  take(base.functions, over.functions);
  take(base.grid, over.grid);
  take(base.eps_min, over.eps_min);
  take(base.eps_max, over.eps_max);
  take(base.eps_count, over.eps_count);
  take(base.log, over.log);
  take(base.cond_limit, over.cond_limit);
  take(base.out, over.out);
  take(base.out_dir, over.out_dir);
  take(base.threads, over.threads);
  take(base.suite, over.suite);
  take(base.sites, over.sites);
  take(base.values, over.values);
  take(base.kernel, over.kernel);
  take(base.J, over.J);
  return base;
}

/// Sweep settings with the defaults filled in: all four kernels and
/// functions, grid 11, 40 log-spaced eps in [1e-2, 1e1], cond limit 1e14.
inline SweepConfig sweep_config(const RunConfig& c) {
  SweepConfig s;
  if (c.kernels) s.kernels = *c.kernels;
  if (c.functions) s.functions = *c.functions;
  if (c.grid) s.grid = *c.grid;
  if (s.grid != 11 && s.grid != 21) throw ConfigError("grid must be 11 or 21, got " + std::to_string(s.grid));
  s.eps = eps_grid(c.eps_min.value_or(1e-2), c.eps_max.value_or(1e1), c.eps_count.value_or(40),
                   c.log.value_or(true));
  if (c.cond_limit) s.cond_limit = *c.cond_limit;
  if (c.threads) s.threads = *c.threads;
  return s;
}

}  // namespace rbfscale
