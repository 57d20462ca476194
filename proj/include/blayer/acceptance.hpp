#pragma once
/// The acceptance suite: one structured result per criterion.

#include "blayer/config.hpp"
#include "blayer/io.hpp"
#include "blayer/prandtl.hpp"

#include <functional>
#include <string>
#include <vector>

namespace blayer {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary; ///< one-line human-readable measurements
  Json metrics;        ///< deterministic measurements (no timings)
  double seconds = 0.0;
};

/// Hyperbolic spectral artifacts consumed by the suite.
struct HyperbolicSpectral {
  Eigenpair eig;
  XProfile x;
  WProfile w;
  SpectralConstants sc;
};

HyperbolicSpectral compute_hyperbolic_spectral(const RunConfig& cfg, const ShearFlow& shear);

using Progress = std::function<void(const std::string&)>;

/// Runs criteria 1–12 with the given constants and W (which may come from stored artifacts).
std::vector<CheckResult> run_acceptance(const RunConfig& cfg, const SpectralConstants& sc, const WProfile& w,
                                        const Progress& progress = {});

/// "PASS  3 W boundary values: ..." style line.
std::string format_check(const CheckResult& r);

Json to_json(const CheckResult& r);

} // namespace blayer
