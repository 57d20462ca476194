#pragma once
/// Run configuration: a flat `key = value` text file with typed scalars and comma-separated lists.

#include "blayer/evolution.hpp"
#include "blayer/profiles.hpp"
#include "blayer/spectral.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace blayer {

struct RunConfig {
  Model model = Model::Hyperbolic;
  ShearFamily shear = ShearFamily::GaussianBump;
  double a = 2.0, kappa = 1.0, beta = 1.0;
  std::string shear_table; ///< CSV path for the table family
  double alpha = 1.0;      ///< weight rate of all norms

  EigenOptions eigen;
  XOptions x;
  YGridOptions ygrid;
  EvolveConfig evolve;

  std::vector<double> ks{64, 128, 256, 512, 1024, 2048, 4096};
  double sigma_fraction = 0.5;
  InflationData inflation_data = InflationData::Profile;

  double profile_k = 256;  ///< frequency of the profile snapshot plots
  double forced_k = 256;
  double duhamel_k = 64;
  std::size_t duhamel_m = 64;
  double oracle_k = 256;
  std::vector<std::size_t> residual_n{3000, 6000, 12000}; ///< y intervals of the residual refinement
  std::vector<std::size_t> w_intervals{3000, 6000, 12000};

  double sobolev_m = 2.0, sobolev_delta = 0.5;
  std::vector<double> sobolev_mu{0.0, 0.25};

  std::string out = "out";
  std::uint64_t seed = 20240601;
  bool quick = false;

  /// Throws ConfigError on violated invariants (tolerances > 0, sorted k list, σ fraction in (0,1)).
  void validate() const;

  /// Canonical `key = value` lines, sorted by key.
  std::string canonical() const;
  /// FNV-1a (64-bit, hex) of the canonical form; independent of the order of keys in the file.
  std::string hash() const;

  ShearFlow make_shear() const;

  /// Restricts k to <= 2^9 and halves the resolutions.
  void apply_quick();
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies one key/value pair (also used for CLI overrides).
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);

/// `%.17g`: shortest form that round-trips a double.
std::string format_double(double v);

} // namespace blayer
