#pragma once
/// Command orchestration: spectrum → profiles → evolution → reports, artifacts and the run manifest.

#include "blayer/acceptance.hpp"
#include "blayer/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace blayer {

inline constexpr const char* TOOL_VERSION = "1.0.0";

class Pipeline {
public:
  /// `log` receives line-oriented progress events.
  Pipeline(RunConfig cfg, std::ostream& log);

  void spectrum();
  void profiles();
  /// check ∈ {forced, duhamel, residual, all}; returns false when a check misses its tolerance.
  bool evolve(const std::string& check);
  bool inflate();
  /// Runs the acceptance suite; returns true iff every criterion passes.
  bool verify();

  const std::vector<CheckResult>& checks() const noexcept { return checks_; }
  const RunConfig& config() const noexcept { return cfg_; }

  /// Writes manifest.json (config hash, version, files, timings, checks).
  void write_manifest(const std::string& command, int exit_code) const;

private:
  struct Spectral {
    SpectralConstants sc;
    WProfile w;
    LayerFunctions lf;
  };

  std::string path(const std::string& name) const;
  void emit(const std::string& stage, const std::string& msg) const;
  void record(const std::string& stage, const std::string& name);
  void save_json(const std::string& stage, const std::string& name, const Json& j);
  void save_text(const std::string& stage, const std::string& name, const std::string& s);
  void time(const std::string& stage, double seconds);

  /// Loads constants.json / wprofile.json when they belong to this configuration, else runs `spectrum`.
  Spectral ensure_spectral();
  Grid1D ygrid(const SpectralConstants& sc, double k) const;
  EvolveConfig evolve_config() const;

  RunConfig cfg_;
  ShearFlow shear_;
  std::ostream& log_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<CheckResult> checks_;
};

/// Runs one subcommand with error-to-exit-code mapping; always writes the manifest.
int run_command(const std::string& command, const RunConfig& cfg, const std::string& check, std::ostream& log);

} // namespace blayer
