#include "blayer/pipeline.hpp"
#include "blayer/error.hpp"
#include "blayer/svg.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

namespace blayer {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string kname(double k) { return std::to_string(static_cast<long long>(std::llround(k))); }

svg::Plot profile_plot(const ComplexProfile& p, double scale, const std::string& title, const std::string& ylabel) {
  svg::Plot pl;
  pl.title = title, pl.xlabel = "y", pl.ylabel = ylabel;
  svg::Series re{"Re", {}, {}}, im{"Im", {}, {}, true};
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double y = p.grid.node(j);
    re.x.push_back(y), im.x.push_back(y);
    re.y.push_back(scale * p[j].real()), im.y.push_back(scale * p[j].imag());
  }
  pl.series = {re, im};
  return pl;
}

svg::Plot norm_plot(const Trajectory& t, const std::string& title, double rate, double n0) {
  svg::Plot pl;
  pl.title = title, pl.xlabel = "t", pl.ylabel = "weighted norm", pl.logy = true;
  svg::Series s{"numerical", t.times, t.norms}, e{"exponential", {}, {}, true};
  for (double tt : t.times) e.x.push_back(tt), e.y.push_back(n0 * std::exp(rate * tt));
  pl.series = {s};
  if (rate > 0) pl.series.push_back(e);
  return pl;
}

} // namespace

Pipeline::Pipeline(RunConfig cfg, std::ostream& log) : cfg_(std::move(cfg)), log_(log) {
  cfg_.validate();
  shear_ = cfg_.make_shear();
}

std::string Pipeline::path(const std::string& name) const { return (std::filesystem::path(cfg_.out) / name).string(); }

void Pipeline::emit(const std::string& stage, const std::string& msg) const { log_ << "[" << stage << "] " << msg << "\n" << std::flush; }

void Pipeline::record(const std::string& stage, const std::string& name) {
  for (const auto& f : files_)
    if (f.second == name) return;
  files_.emplace_back(stage, name);
}

void Pipeline::save_json(const std::string& stage, const std::string& name, const Json& j) {
  write_json(path(name), j);
  record(stage, name);
}

void Pipeline::save_text(const std::string& stage, const std::string& name, const std::string& s) {
  write_text(path(name), s);
  record(stage, name);
}

void Pipeline::time(const std::string& stage, double seconds) { timings_.emplace_back(stage, seconds); }

Grid1D Pipeline::ygrid(const SpectralConstants& sc, double k) const {
  const bool quadratic = shear_.family() == ShearFamily::Quadratic;
  YGridOptions o = cfg_.ygrid;
  if (quadratic && !(o.L > 0)) o.L = shear_.a() + 8.0;
  return make_ygrid(sc, shear_, k, quadratic ? 0.0 : cfg_.alpha, o);
}

EvolveConfig Pipeline::evolve_config() const {
  EvolveConfig e = cfg_.evolve;
  e.alpha = shear_.decaying() ? cfg_.alpha : 0.0;
  return e;
}

// ---- spectrum ----------------------------------------------------------------

void Pipeline::spectrum() {
  const auto t0 = Clock::now();
  const Eigenpair eig = solve_eigenproblem(cfg_.eigen);
  emit("spectrum", "alpha = " + format_double(eig.alpha) + ", residual = " + format_double(eig.residual));
  const SpectralConstants hyp = spectral_constants_hyperbolic(eig.alpha, shear_.curvature());
  Json constants;
  XProfile x;
  WProfile w;
  if (cfg_.model == Model::Hyperbolic) {
    shear_.require_hyperbolic_admissible();
    x = solve_X(hyp.gamma, hyperbolic_coefficient(hyp.gamma), cfg_.x);
    w = build_W(x);
    constants = to_json(hyp);
  } else {
    PrandtlOptions po;
    po.x = cfg_.x;
    const PrandtlSpectral ps = spectral_constants_prandtl(shear_, hyp.gamma, po);
    x = ps.x, w = ps.w;
    constants = to_json(ps.sc);
    constants["seed"] = num(ps.seed);
    constants["iterations"] = ps.iterations;
    constants["defect_perturbed"] = num(ps.defect_perturbed);
  }
  constants["defect"] = num(x.defect);
  constants["W_residual"] = num(w.residual);
  constants["config_hash"] = cfg_.hash();
  const SpectralConstants sc = constants_from_json(constants);
  emit("spectrum", "model = " + to_string(sc.model) + ", gamma = " + format_double(sc.gamma.real()) + " " +
                       format_double(sc.gamma.imag()) + "i, tau = " + format_double(sc.tau.real()) + " " +
                       format_double(sc.tau.imag()) + "i, sigma0 = " + format_double(sc.sigma0));
  emit("spectrum", "matching defect = " + format_double(x.defect) + ", W residual = " + format_double(w.residual));
  save_json("spectrum", "eigenpair.json", to_json(eig));
  save_json("spectrum", "xprofile.json", to_json(x));
  save_json("spectrum", "wprofile.json", to_json(w));
  save_json("spectrum", "constants.json", constants);
  time("spectrum", since(t0));
}

Pipeline::Spectral Pipeline::ensure_spectral() {
  const std::string cpath = path("constants.json"), wpath = path("wprofile.json");
  if (std::filesystem::exists(cpath) && std::filesystem::exists(wpath)) {
    const Json c = read_json(cpath);
    if (c.value("config_hash", std::string()) == cfg_.hash()) {
      emit("spectrum", "reusing " + cpath);
      const SpectralConstants sc = constants_from_json(c);
      if (sc.model != cfg_.model) throw ConfigError("stored constants belong to another model");
      WProfile w = wprofile_from_json(read_json(wpath));
      record("spectrum", "constants.json");
      record("spectrum", "wprofile.json");
      LayerFunctions lf(w, sc.mirrored());
      return {sc, std::move(w), std::move(lf)};
    }
  }
  spectrum();
  const SpectralConstants sc = constants_from_json(read_json(cpath));
  WProfile w = wprofile_from_json(read_json(wpath));
  LayerFunctions lf(w, sc.mirrored());
  return {sc, std::move(w), std::move(lf)};
}

// ---- profiles ----------------------------------------------------------------

void Pipeline::profiles() {
  const Spectral s = ensure_spectral();
  const auto t0 = Clock::now();
  const bool hyp = s.sc.model == Model::Hyperbolic;
  if (hyp) {
    const VProfile v = build_V(s.w, s.sc, shear_, false);
    const auto& J = v.jumps;
    save_json("profiles", "jumps.json",
              Json{{"jump_V", num(J.jump_V)}, {"jump_dV", num(J.jump_dV)}, {"jump_d2V", num(J.jump_d2V)},
                   {"err_V", num(J.err_V)}, {"err_dV", num(J.err_dV)}, {"err_d2V", num(J.err_d2V)}});
    emit("profiles", "jump errors: " + format_double(J.err_V) + ", " + format_double(J.err_dV) + ", " +
                         format_double(J.err_d2V));
  }
  const double alpha = shear_.decaying() ? cfg_.alpha : 0.0;
  YGridOptions yo = cfg_.ygrid;
  if (!shear_.decaying() && !(yo.L > 0)) yo.L = shear_.a() + 8.0;
  const BoundsSummary b = bounds_sweep(cfg_.ks, s.lf, s.sc, shear_, alpha, yo);
  std::vector<std::vector<double>> rows;
  for (const auto& r : b.rows) rows.push_back({r.k, r.norm_U, r.norm_R_scaled});
  write_csv(path("bounds.csv"), {"k", "norm_U", hyp ? "k43_norm_R" : "k_norm_R"}, rows);
  record("profiles", "bounds.csv");
  save_json("profiles", "bounds.json", to_json(b));
  emit("profiles", "max/min |U_k| = " + format_double(b.ratio_U) + ", limit rate = " + format_double(b.limit_rate));

  const double k = cfg_.profile_k;
  const Grid1D y = ygrid(s.sc, k);
  const ProfileSetK P = hyp ? build_profile_set(k, s.lf, s.sc, shear_, y, alpha)
                            : build_profile_set_prandtl(k, s.lf, s.sc, shear_, y, alpha);
  save_json("profiles", "profiles_k" + kname(k) + ".json", to_json(P));
  save_text("profiles", "profile_U_k" + kname(k) + ".svg",
            svg::render(profile_plot(P.U, 1.0, "U_k at k = " + kname(k), "U_k")));
  save_text("profiles", "profile_R_k" + kname(k) + ".svg",
            svg::render(profile_plot(P.R, P.forcing_scale, "scaled R_k at k = " + kname(k), "scaled R_k")));
  time("profiles", since(t0));
}

// ---- evolution ---------------------------------------------------------------

bool Pipeline::evolve(const std::string& check) {
  if (check != "forced" && check != "duhamel" && check != "residual" && check != "all")
    throw ConfigError("unknown check '" + check + "' (forced | duhamel | residual | all)");
  const Spectral s = ensure_spectral();
  const auto t0 = Clock::now();
  const bool hyp = s.sc.model == Model::Hyperbolic;
  const double alpha = shear_.decaying() ? cfg_.alpha : 0.0;
  bool ok = true;

  if (check == "forced" || check == "all") {
    const double k = cfg_.forced_k;
    const Grid1D y = ygrid(s.sc, k);
    const ProfileSetK P = hyp ? build_profile_set(k, s.lf, s.sc, shear_, y, alpha)
                              : build_profile_set_prandtl(k, s.lf, s.sc, shear_, y, alpha);
    const double T = inflation_window(s.sc.model, k, s.sc.sigma0, cfg_.sigma_fraction * s.sc.sigma0);
    EvolveConfig e = evolve_config();
    if (!shear_.decaying()) e.norm_ymax = 0.9 * y.hi();
    const ForcedCheck f = forced_check(P, s.sc, shear_, T, e);
    const bool pass = f.max_rel_deviation <= 0.01 && std::abs(f.slope_ratio - 1.0) <= 0.01;
    ok = ok && pass;
    emit("evolve", "forced k = " + kname(k) + ": relative deviation = " + format_double(f.max_rel_deviation) +
                       ", slope ratio = " + format_double(f.slope_ratio) + (pass ? " (pass)" : " (FAIL)"));
    Json j = to_json(f.traj);
    j["max_rel_deviation"] = num(f.max_rel_deviation);
    j["slope_ratio"] = num(f.slope_ratio);
    save_json("evolve", "trajectory_forced.json", j);
    save_text("evolve", "norm_vs_time_forced.svg",
              svg::render(norm_plot(f.traj, "forced run, k = " + kname(k), s.sc.sigma0 * std::pow(k, s.sc.rate_power()),
                                    f.traj.norms.front())));
  }
  if (check == "residual" || check == "all") {
    if (!hyp) throw ConfigError("the substitution residual check applies to the hyperbolic model");
    const double k = 64;
    const double r = substitution_residual(build_profile_set(k, s.lf, s.sc, shear_, ygrid(s.sc, k), alpha), s.sc, shear_);
    ok = ok && r <= 1e-3;
    emit("evolve", "substitution residual k = 64: " + format_double(r) + (r <= 1e-3 ? " (pass)" : " (FAIL)"));
    save_json("evolve", "residual.json", Json{{"k", num(k)}, {"residual", num(r)}});
  }
  if (check == "duhamel" || check == "all") {
    if (!hyp) throw ConfigError("the Duhamel check applies to the hyperbolic model");
    const double k = cfg_.duhamel_k;
    const ProfileSetK P = build_profile_set(k, s.lf, s.sc, shear_, ygrid(s.sc, k), alpha);
    const double T = 0.5 * inflation_window(s.sc.model, k, s.sc.sigma0, cfg_.sigma_fraction * s.sc.sigma0);
    const DuhamelResult d = duhamel_check(P, shear_, T, cfg_.duhamel_m, evolve_config());
    const bool pass = d.discrepancy <= 0.01;
    ok = ok && pass;
    emit("evolve", "Duhamel k = " + kname(k) + ", M = " + std::to_string(d.M) +
                       ": relative discrepancy = " + format_double(d.discrepancy) + (pass ? " (pass)" : " (FAIL)"));
    save_json("evolve", "duhamel.json",
              Json{{"k", num(k)}, {"horizon", num(T)}, {"M", d.M}, {"dt", num(d.dt)}, {"discrepancy", num(d.discrepancy)}});
  }
  time("evolve", since(t0));
  return ok;
}

// ---- inflation ---------------------------------------------------------------

bool Pipeline::inflate() {
  const Spectral s = ensure_spectral();
  const auto t0 = Clock::now();
  bool ok = true;
  if (s.sc.model == Model::Prandtl && shear_.family() == ShearFamily::Quadratic) {
    PrandtlSpectral ps;
    ps.sc = s.sc, ps.w = s.w;
    const QuadraticOracle o = quadratic_oracle(cfg_.oracle_k, ps, shear_, cfg_.ygrid, cfg_.evolve);
    ok = o.R_norm <= 1e-12 && std::abs(o.slope_ratio - 1.0) <= 0.02;
    emit("inflate", "quadratic-shear oracle k = " + kname(o.k) + ": |R_k| = " + format_double(o.R_norm) +
                        ", slope/(sigma0_P sqrt k) = " + format_double(o.slope_ratio) + (ok ? " (pass)" : " (FAIL)"));
    Json j = to_json(o.traj);
    j["R_norm"] = num(o.R_norm);
    j["slope_ratio"] = num(o.slope_ratio);
    j["max_rel_deviation"] = num(o.max_rel_deviation);
    j["horizon"] = num(o.horizon);
    save_json("inflate", "quadratic_oracle.json", j);
    save_text("inflate", "norm_vs_time_oracle.svg",
              svg::render(norm_plot(o.traj, "quadratic shear, k = " + kname(o.k), s.sc.sigma0 * std::sqrt(o.k),
                                    o.traj.norms.front())));
    time("inflate", since(t0));
    return ok;
  }
  if (!shear_.decaying()) throw ConfigError("inflation sweeps need a decaying shear flow");
  InflationOptions o;
  o.sigma_fraction = cfg_.sigma_fraction;
  o.data = cfg_.inflation_data;
  o.ygrid = cfg_.ygrid;
  o.evolve = evolve_config();
  const InflationReport rep = inflation_experiment(cfg_.ks, s.lf, s.sc, shear_, o);
  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.records) {
    rows.push_back({r.k, r.S, r.t_argmax, r.C_ref});
    emit("inflate", "k = " + kname(r.k) + ": S_k = " + format_double(r.S) + " at t = " + format_double(r.t_argmax));
  }
  write_csv(path("inflation.csv"), {"k", "S_k", "t_argmax", "C_ref"}, rows);
  record("inflate", "inflation.csv");
  save_json("inflate", "inflation.json", to_json(rep));
  emit("inflate", "fitted exponent = " + format_double(rep.exponent) +
                      ", strictly increasing = " + (rep.strictly_increasing ? "yes" : "no"));

  svg::Plot pl;
  pl.title = to_string(rep.model) + " inflation, sigma = sigma0/2";
  pl.xlabel = "k", pl.ylabel = "S_k", pl.logx = pl.logy = true;
  svg::Series sk{"S_k", {}, {}}, ref{std::string("slope ") + (rep.model == Model::Hyperbolic ? "1/3" : "1/2"), {}, {}, true},
      cref{"C_sigma k^p", {}, {}, true};
  const double p = s.sc.rate_power();
  for (const auto& r : rep.records) {
    sk.x.push_back(r.k), sk.y.push_back(r.S);
    ref.x.push_back(r.k), ref.y.push_back(rep.records.back().S * std::pow(r.k / rep.records.back().k, p));
    cref.x.push_back(r.k), cref.y.push_back(r.C_ref);
  }
  pl.series = {sk, ref, cref};
  save_text("inflate", "inflation.svg", svg::render(pl));
  time("inflate", since(t0));
  return ok;
}

// ---- verify ------------------------------------------------------------------

bool Pipeline::verify() {
  if (cfg_.model != Model::Hyperbolic) {
    emit("verify", "the suite starts from hyperbolic constants; model switched to hyperbolic");
    cfg_.model = Model::Hyperbolic;
  }
  const Spectral s = ensure_spectral();
  const auto t0 = Clock::now();
  checks_ = run_acceptance(cfg_, s.sc, s.w, [this](const std::string& line) { emit("verify", line); });
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks_) {
    arr.push_back(to_json(c));
    all = all && c.passed;
    timings_.emplace_back("check " + std::to_string(c.id), c.seconds);
  }
  save_json("verify", "acceptance.json", Json{{"config_hash", cfg_.hash()}, {"quick", cfg_.quick}, {"checks", arr}, {"passed", all}});
  time("verify", since(t0));
  emit("verify", all ? "all checks passed" : "some checks FAILED");
  return all;
}

void Pipeline::write_manifest(const std::string& command, int exit_code) const {
  Json files = Json::array();
  for (const auto& [stage, name] : files_) files.push_back({{"stage", stage}, {"path", name}});
  Json timings = Json::object();
  for (const auto& [stage, secs] : timings_) timings[stage] = num(secs);
  Json checks = Json::array();
  for (const auto& c : checks_) checks.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}});
  write_json(path("manifest.json"), Json{{"config_hash", cfg_.hash()},
                                        {"tool_version", TOOL_VERSION},
                                        {"command", command},
                                        {"exit_code", exit_code},
                                        {"files", files},
                                        {"timings_seconds", timings},
                                        {"checks", checks}});
}

int run_command(const std::string& command, const RunConfig& cfg, const std::string& check, std::ostream& log) {
  std::unique_ptr<Pipeline> p;
  int code = 0;
  try {
    p = std::make_unique<Pipeline>(cfg, log);
    bool ok = true;
    if (command == "spectrum") p->spectrum();
    else if (command == "profiles") p->profiles();
    else if (command == "evolve") ok = p->evolve(check.empty() ? "forced" : check);
    else if (command == "inflate") ok = p->inflate();
    else if (command == "verify") ok = p->verify();
    else throw ConfigError("unknown command '" + command + "'");
    code = ok ? 0 : static_cast<int>(ExitCode::Verification);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    code = static_cast<int>(e.code());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    code = static_cast<int>(ExitCode::Verification);
  }
  if (p) {
    try {
      p->write_manifest(command, code);
    } catch (const Error& e) {
      log << "error: " << e.what() << "\n";
      if (code == 0) code = static_cast<int>(e.code());
    }
  }
  return code;
}

} // namespace blayer
