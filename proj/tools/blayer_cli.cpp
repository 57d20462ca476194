/// blayer: spectral constants, boundary-layer profiles, evolution checks and inflation sweeps.

#include "blayer/error.hpp"
#include "blayer/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Boundary-layer instability verification toolkit"};
  app.set_version_flag("--version", std::string(blayer::TOOL_VERSION));
  app.require_subcommand(1, 1);

  std::string model, shear, config_path, out, check;
  bool quick = false;
  std::vector<std::string> sets;
  app.add_option("--model", model, "hyperbolic | prandtl");
  app.add_option("--shear", shear, "gaussian | quadratic | table");
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out, "output directory (overrides BLAYER_OUT and the config)");
  app.add_flag("--quick", quick, "k <= 2^9 and halved resolutions");
  app.add_option("--check", check, "evolve: forced | duhamel | residual | all");
  app.add_option("--set", sets, "override one configuration key (key=value)");

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "eigenpair, X, W and the spectral constants"},
      {"profiles", "jump conditions, uniform bounds sweep and profile snapshots"},
      {"evolve", "forced exact solution, Duhamel identity or substitution residual"},
      {"inflate", "norm-inflation sweep (and the quadratic-shear oracle for the Prandtl model)"},
      {"verify", "acceptance suite"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  blayer::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = blayer::load_config(config_path);
    if (const char* env = std::getenv("BLAYER_OUT"); env && *env) cfg.out = env;
    if (!out.empty()) cfg.out = out;
    if (!model.empty()) blayer::set_config_value(cfg, "model", model);
    if (!shear.empty()) blayer::set_config_value(cfg, "shear", shear);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw blayer::ConfigError("--set expects key=value, got '" + s + "'");
      blayer::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (quick || cfg.quick) cfg.apply_quick();
  } catch (const blayer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  return blayer::run_command(command, cfg, check, std::cerr);
}
