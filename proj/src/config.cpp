#include "blayer/config.hpp"
#include "blayer/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace blayer {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

std::size_t to_size(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
    throw ConfigError("key '" + key + "' expects a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(v[i]);
  return s;
}

struct Key {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

#define BL_DOUBLE(NAME, FIELD)                                                                                      \
  Key{NAME, [](const RunConfig& c) { return format_double(c.FIELD); },                                             \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_double(k, v); }}
#define BL_SIZE(NAME, FIELD)                                                                                        \
  Key{NAME, [](const RunConfig& c) { return std::to_string(c.FIELD); },                                            \
      [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_size(k, v); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      Key{"model", [](const RunConfig& c) { return to_string(c.model); },
          [](RunConfig& c, const std::string&, const std::string& v) { c.model = model_from_string(v); }},
      Key{"shear", [](const RunConfig& c) { return to_string(c.shear); },
          [](RunConfig& c, const std::string&, const std::string& v) { c.shear = shear_family_from_string(v); }},
      BL_DOUBLE("shear.a", a),
      BL_DOUBLE("shear.kappa", kappa),
      BL_DOUBLE("shear.beta", beta),
      Key{"shear.table", [](const RunConfig& c) { return c.shear_table; },
          [](RunConfig& c, const std::string&, const std::string& v) { c.shear_table = v; }},
      BL_DOUBLE("alpha", alpha),
      BL_DOUBLE("eigen.xbar", eigen.xbar),
      BL_SIZE("eigen.n", eigen.n),
      BL_DOUBLE("eigen.window_lo", eigen.window_lo),
      BL_DOUBLE("eigen.window_hi", eigen.window_hi),
      BL_DOUBLE("eigen.residual_tol", eigen.residual_tol),
      BL_DOUBLE("x.z", x.z_half),
      BL_SIZE("x.intervals", x.intervals),
      BL_DOUBLE("x.rtol", x.rtol),
      BL_DOUBLE("x.defect_tol", x.defect_tol),
      BL_DOUBLE("x.zero_average_tol", x.zero_average_tol),
      BL_DOUBLE("y.L", ygrid.L),
      BL_DOUBLE("y.h_max", ygrid.h_max),
      BL_DOUBLE("y.nodes_per_layer", ygrid.nodes_per_layer),
      BL_DOUBLE("y.min_nodes_per_layer", ygrid.min_nodes_per_layer),
      BL_DOUBLE("evolve.cfl", evolve.cfl),
      BL_DOUBLE("evolve.cfl_parabolic", evolve.cfl_parabolic),
      BL_SIZE("evolve.samples", evolve.samples),
      Key{"ks", [](const RunConfig& c) { return join(c.ks, format_double); },
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.ks.clear();
            for (const auto& s : split_list(v)) c.ks.push_back(to_double(k, s));
          }},
      BL_DOUBLE("sigma_fraction", sigma_fraction),
      Key{"inflation.data", [](const RunConfig& c) { return to_string(c.inflation_data); },
          [](RunConfig& c, const std::string&, const std::string& v) { c.inflation_data = inflation_data_from_string(v); }},
      BL_DOUBLE("profiles.k", profile_k),
      BL_DOUBLE("forced.k", forced_k),
      BL_DOUBLE("duhamel.k", duhamel_k),
      BL_SIZE("duhamel.m", duhamel_m),
      BL_DOUBLE("oracle.k", oracle_k),
      Key{"residual.intervals", [](const RunConfig& c) { return join(c.residual_n, [](std::size_t n) { return std::to_string(n); }); },
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.residual_n.clear();
            for (const auto& s : split_list(v)) c.residual_n.push_back(to_size(k, s));
          }},
      Key{"w.intervals", [](const RunConfig& c) { return join(c.w_intervals, [](std::size_t n) { return std::to_string(n); }); },
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.w_intervals.clear();
            for (const auto& s : split_list(v)) c.w_intervals.push_back(to_size(k, s));
          }},
      BL_DOUBLE("sobolev.m", sobolev_m),
      BL_DOUBLE("sobolev.delta", sobolev_delta),
      Key{"sobolev.mu", [](const RunConfig& c) { return join(c.sobolev_mu, format_double); },
          [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sobolev_mu.clear();
            for (const auto& s : split_list(v)) c.sobolev_mu.push_back(to_double(k, s));
          }},
      Key{"out", [](const RunConfig& c) { return c.out; },
          [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
      Key{"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
          [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_size(k, v); }},
      Key{"quick", [](const RunConfig& c) { return std::string(c.quick ? "true" : "false"); },
          [](RunConfig& c, const std::string& k, const std::string& v) { c.quick = to_bool(k, v); }},
  };
  return table;
}

#undef BL_DOUBLE
#undef BL_SIZE

} // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  for (const auto& k : keys())
    if (key == k.name) {
      k.set(c, key, trim(value));
      return;
    }
  throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(eigen.residual_tol, "eigen.residual_tol");
  positive(x.rtol, "x.rtol");
  positive(x.defect_tol, "x.defect_tol");
  positive(x.zero_average_tol, "x.zero_average_tol");
  positive(ygrid.h_max, "y.h_max");
  positive(ygrid.nodes_per_layer, "y.nodes_per_layer");
  positive(evolve.cfl, "evolve.cfl");
  positive(evolve.cfl_parabolic, "evolve.cfl_parabolic");
  if (alpha < 0) throw ConfigError("alpha must be >= 0");
  if (ks.empty()) throw ConfigError("ks must not be empty");
  if (!std::is_sorted(ks.begin(), ks.end()) || std::adjacent_find(ks.begin(), ks.end()) != ks.end())
    throw ConfigError("ks must be sorted ascending without repeats");
  if (ks.front() < 1) throw ConfigError("ks must be >= 1");
  if (!(sigma_fraction > 0 && sigma_fraction < 1)) throw ConfigError("sigma_fraction must lie in (0,1)");
  if (duhamel_m < 2 || duhamel_m % 2) throw ConfigError("duhamel.m must be even and >= 2");
  if (residual_n.size() < 3 || w_intervals.size() < 3) throw ConfigError("refinement lists need three resolutions");
  if (shear == ShearFamily::UserTable && shear_table.empty()) throw ConfigError("shear = table needs shear.table");
  for (double mu : sobolev_mu)
    if (!(mu >= 0 && mu < 1.0 / 3.0)) throw ConfigError("sobolev.mu entries must lie in [0, 1/3)");
}

std::string RunConfig::canonical() const {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& k : keys())
    if (std::string(k.name) != "out") kv.emplace_back(k.name, k.get(*this));
  std::sort(kv.begin(), kv.end());
  std::string s;
  for (const auto& [k, v] : kv) s += k + " = " + v + "\n";
  return s;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ShearFlow RunConfig::make_shear() const {
  switch (shear) {
  case ShearFamily::GaussianBump: return ShearFlow::gaussian_bump(a, kappa, beta);
  case ShearFamily::Quadratic: return ShearFlow::quadratic(a);
  case ShearFamily::UserTable: return ShearFlow::table(ShearTable::load_csv(shear_table), a);
  }
  throw ConfigError("unknown shear family");
}

void RunConfig::apply_quick() {
  quick = true;
  std::erase_if(ks, [](double k) { return k > 512; });
  if (ks.empty()) ks = {64};
  eigen.n /= 2;
  x.intervals /= 2;
  ygrid.h_max *= 2;
  ygrid.nodes_per_layer /= 2;
  for (auto& n : residual_n) n /= 2;
  for (auto& n : w_intervals) n /= 2;
  profile_k = std::min(profile_k, ks.back());
  forced_k = std::min(forced_k, ks.back());
  oracle_k = std::min(oracle_k, ks.back());
  // no k <= 2^9 has T_k <= 0.5; the demo needs a window that admits one
  sobolev_delta = std::max(sobolev_delta, 0.8);
}

} // namespace blayer
