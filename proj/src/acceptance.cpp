#include "blayer/acceptance.hpp"
#include "blayer/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace blayer {

HyperbolicSpectral compute_hyperbolic_spectral(const RunConfig& cfg, const ShearFlow& shear) {
  HyperbolicSpectral h;
  h.eig = solve_eigenproblem(cfg.eigen);
  h.sc = spectral_constants_hyperbolic(h.eig, shear);
  h.x = solve_X(h.sc.gamma, hyperbolic_coefficient(h.sc.gamma), cfg.x);
  h.w = build_W(h.x);
  return h;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fix(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Suite {
public:
  Suite(const RunConfig& cfg, const SpectralConstants& sc, const WProfile& w, const Progress& progress)
      : cfg_(cfg), sc_(sc), w_(w), lf_(w, sc.mirrored()), progress_(progress), shear_(cfg.make_shear()) {
    if (!shear_.decaying()) throw ConfigError("the acceptance suite needs a decaying shear flow");
  }

  std::vector<CheckResult> run() {
    std::vector<CheckResult> out;
    using Fn = CheckResult (Suite::*)();
    const Fn fns[] = {&Suite::c1, &Suite::c2, &Suite::c3, &Suite::c4,  &Suite::c5,  &Suite::c6,
                      &Suite::c7, &Suite::c8, &Suite::c9, &Suite::c10, &Suite::c11, &Suite::c12};
    for (Fn f : fns) {
      const auto t0 = std::chrono::steady_clock::now();
      CheckResult r;
      try {
        r = (this->*f)();
      } catch (const Error& e) {
        r.passed = false;
        r.summary = std::string("error: ") + e.what();
      }
      r.id = static_cast<int>(out.size()) + 1;
      if (r.name.empty()) r.name = NAMES[r.id - 1];
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (progress_) progress_(format_check(r));
      out.push_back(std::move(r));
    }
    return out;
  }

private:
  static constexpr const char* NAMES[12] = {
      "spectral residual",        "sign structure",        "W boundary values",  "jump conditions",
      "substitution residual",    "uniform bounds sweep",  "forced exact solution", "Duhamel identity",
      "hyperbolic inflation",     "quadratic-shear oracle", "Prandtl inflation",   "Sobolev inflation demo"};

  const RunConfig& cfg_;
  const SpectralConstants& sc_;
  const WProfile& w_;
  LayerFunctions lf_;
  Progress progress_;
  ShearFlow shear_;
  std::optional<PrandtlSpectral> prandtl_;

  const PrandtlSpectral& prandtl() {
    if (!prandtl_) {
      PrandtlOptions po;
      po.x = cfg_.x;
      prandtl_ = spectral_constants_prandtl(shear_, sc_.gamma, po);
    }
    return *prandtl_;
  }

  Grid1D ygrid(double k) const { return make_ygrid(sc_, shear_, k, cfg_.alpha, cfg_.ygrid); }

  InflationOptions inflation_options() const {
    InflationOptions o;
    o.sigma_fraction = cfg_.sigma_fraction;
    o.data = cfg_.inflation_data;
    o.ygrid = cfg_.ygrid;
    o.evolve = cfg_.evolve;
    o.evolve.alpha = cfg_.alpha;
    return o;
  }

  EvolveConfig evolve_config() const {
    EvolveConfig e = cfg_.evolve;
    e.alpha = cfg_.alpha;
    return e;
  }

  // 1: residual, grid doubling, window invariance, runtime
  CheckResult c1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigenpair e = solve_eigenproblem(cfg_.eigen);
    EigenOptions o2 = cfg_.eigen;
    o2.n *= 2;
    const double a2 = solve_eigenproblem(o2).alpha;
    double window = 0.0;
    Json xb = Json::object();
    for (double xbar : {10.0, 12.0, 14.0}) {
      EigenOptions o = cfg_.eigen;
      o.xbar = xbar;
      const double a = solve_eigenproblem(o).alpha;
      xb[fix(xbar, 0)] = num(a);
      window = std::max(window, rel(a, e.alpha));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double doubling = rel(e.alpha, a2);
    CheckResult r;
    r.passed = e.residual <= 1e-7 && doubling <= 1e-5 && window <= 1e-5 && secs <= 60.0;
    r.metrics = {{"alpha", num(e.alpha)},     {"residual", num(e.residual)}, {"doubling_rel", num(doubling)},
                 {"xbar_rel", num(window)},   {"alpha_by_xbar", xb},         {"parity", e.parity},
                 {"parity_defect", num(e.parity_defect)}};
    r.summary = "alpha=" + fix(e.alpha, 10) + " residual=" + sci(e.residual) + " doubling=" + sci(doubling) +
                " xbar-spread=" + sci(window) + (secs <= 60.0 ? "" : " (over 60 s)");
    return r;
  }

  // 2: Im γ, Im τ < 0, arg γ = -2π/3; Im γ_P < 0
  CheckResult c2() {
    const double arg_err = std::abs(std::arg(sc_.gamma) + 2.0 * std::numbers::pi / 3.0);
    const PrandtlSpectral& p = prandtl();
    CheckResult r;
    r.passed = sc_.gamma.imag() < 0 && sc_.tau.imag() < 0 && arg_err <= 1e-12 && p.sc.gamma.imag() < 0 &&
               p.sc.tau.imag() < 0;
    r.metrics = {{"gamma", num(sc_.gamma)},   {"tau", num(sc_.tau)},
                 {"sigma0", num(sc_.sigma0)}, {"arg_error", num(arg_err)},
                 {"gamma_prandtl", num(p.sc.gamma)}, {"tau_prandtl", num(p.sc.tau)},
                 {"sigma0_prandtl", num(p.sc.sigma0)}, {"prandtl_defect", num(p.defect)},
                 {"prandtl_defect_perturbed", num(p.defect_perturbed)}};
    r.summary = "Im(gamma)=" + fix(sc_.gamma.imag(), 6) + " Im(tau)=" + fix(sc_.tau.imag(), 6) +
                " arg-error=" + sci(arg_err) + " Im(gamma_P)=" + fix(p.sc.gamma.imag(), 6);
    return r;
  }

  // 3: W boundary values and refinement order of the integrated ODE residual
  CheckResult c3() {
    const double left = std::abs(w_.W.values.front()), right = std::abs(w_.W.values.back() - 1.0);
    RVec h, res;
    for (std::size_t n : cfg_.w_intervals) {
      XOptions xo = cfg_.x;
      xo.intervals = n;
      const WProfile w = build_W(solve_X(sc_.gamma, hyperbolic_coefficient(sc_.gamma), xo));
      h.push_back(2.0 * xo.z_half / static_cast<double>(n));
      res.push_back(w.residual);
    }
    const double slope = fit_loglog(h, res).slope;
    CheckResult r;
    r.passed = left <= 1e-8 && right <= 1e-8 && std::abs(slope - 2.0) <= 0.3;
    Json rj = Json::array();
    for (double v : res) rj.push_back(num(v));
    r.metrics = {{"W_left", num(left)}, {"W_right_defect", num(right)}, {"residuals", rj}, {"slope", num(slope)}};
    r.summary = "|W(-Z)|=" + sci(left) + " |W(Z)-1|=" + sci(right) + " residual order=" + fix(slope, 3);
    return r;
  }

  // 4: jumps of V
  CheckResult c4() {
    const VProfile v = build_V(w_, sc_, shear_, false);
    const auto& J = v.jumps;
    CheckResult r;
    r.passed = J.err_V <= 1e-3 && J.err_dV <= 1e-3 && J.err_d2V <= 1e-3;
    r.metrics = {{"err_V", num(J.err_V)}, {"err_dV", num(J.err_dV)}, {"err_d2V", num(J.err_d2V)},
                 {"jump_V", num(J.jump_V)}, {"jump_dV", num(J.jump_dV)}, {"jump_d2V", num(J.jump_d2V)}};
    r.summary = "[V]+tau: " + sci(J.err_V) + " [V']: " + sci(J.err_dV) + " [V'']+U'': " + sci(J.err_d2V);
    return r;
  }

  // 5: substitution residual at k = 64 and its refinement order
  CheckResult c5() {
    const double k = 64;
    const ProfileSetK P = build_profile_set(k, lf_, sc_, shear_, ygrid(k), cfg_.alpha);
    const double prod = substitution_residual(P, sc_, shear_);
    const double L = ygrid(k).hi();
    RVec h, res;
    for (std::size_t n : cfg_.residual_n) {
      const Grid1D y = Grid1D::with_node_at(0.0, L, shear_.a(), L / static_cast<double>(n));
      res.push_back(substitution_residual(build_profile_set(k, lf_, sc_, shear_, y, cfg_.alpha), sc_, shear_));
      h.push_back(y.h());
    }
    const double slope = fit_loglog(h, res).slope;
    // probe: a wrong τ must be visible
    SpectralConstants bad = sc_;
    bad.tau *= 1.1;
    const double probe = substitution_residual(build_profile_set(k, lf_, bad, shear_, ygrid(k), cfg_.alpha), bad, shear_);
    CheckResult r;
    r.passed = prod <= 1e-3 && std::abs(slope - 2.0) <= 0.3;
    Json rj = Json::array();
    for (double v : res) rj.push_back(num(v));
    r.metrics = {{"residual", num(prod)}, {"refinement", rj}, {"slope", num(slope)}, {"tau_probe_ratio", num(probe / prod)}};
    r.summary = "residual(k=64)=" + sci(prod) + " order=" + fix(slope, 3) + " 1.1*tau probe x" + sci(probe / prod);
    return r;
  }

  // 6: uniform bounds
  CheckResult c6() {
    const auto t0 = std::chrono::steady_clock::now();
    const BoundsSummary b = bounds_sweep(cfg_.ks, lf_, sc_, shear_, cfg_.alpha, cfg_.ygrid);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CheckResult r;
    r.passed = b.ratio_U <= 3.0 && b.min_U > 0.1 * b.limit_norm && b.top_octave_R_factor <= 2.0 &&
               std::abs(b.limit_rate + 1.0 / 3.0) <= 0.05 && secs <= 300.0;
    r.metrics = to_json(b);
    r.summary = "max/min |U_k|=" + fix(b.ratio_U) + " min/limit=" + fix(b.min_U / b.limit_norm) +
                " top-octave R factor=" + fix(b.top_octave_R_factor) + " limit rate=" + fix(b.limit_rate);
    return r;
  }

  // 7: forced exact solution over the window at k = 256
  CheckResult c7() {
    const double k = cfg_.forced_k;
    const ProfileSetK P = build_profile_set(k, lf_, sc_, shear_, ygrid(k), cfg_.alpha);
    const double T = inflation_window(Model::Hyperbolic, k, sc_.sigma0, cfg_.sigma_fraction * sc_.sigma0);
    const ForcedCheck f = forced_check(P, sc_, shear_, T, evolve_config());
    CheckResult r;
    r.passed = f.max_rel_deviation <= 0.01 && f.max_norm_ratio_error <= 0.01 && std::abs(f.slope_ratio - 1.0) <= 0.01;
    r.metrics = {{"k", num(k)}, {"T", num(T)}, {"max_rel_deviation", num(f.max_rel_deviation)},
                 {"max_norm_ratio_error", num(f.max_norm_ratio_error)}, {"slope_ratio", num(f.slope_ratio)},
                 {"slope_fit_residual", num(f.slope_fit_residual)}, {"steps", f.traj.steps}};
    r.summary = "k=" + fix(k, 0) + " T=" + fix(T) + " deviation=" + sci(f.max_rel_deviation) +
                " slope ratio=" + fix(f.slope_ratio, 6);
    return r;
  }

  // 8: Duhamel at k = 64, horizon T_k/2
  CheckResult c8() {
    const double k = cfg_.duhamel_k;
    const ProfileSetK P = build_profile_set(k, lf_, sc_, shear_, ygrid(k), cfg_.alpha);
    const double T = 0.5 * inflation_window(Model::Hyperbolic, k, sc_.sigma0, cfg_.sigma_fraction * sc_.sigma0);
    const DuhamelResult d = duhamel_check(P, shear_, T, cfg_.duhamel_m, evolve_config());
    CheckResult r;
    r.passed = d.discrepancy <= 0.01;
    r.metrics = {{"k", num(k)}, {"horizon", num(T)}, {"M", d.M}, {"dt", num(d.dt)}, {"discrepancy", num(d.discrepancy)}};
    r.summary = "k=" + fix(k, 0) + " M=" + std::to_string(d.M) + " discrepancy=" + sci(d.discrepancy);
    return r;
  }

  static double max_window_error(const InflationReport& rep) {
    double e = 0.0;
    for (const auto& x : rep.records) e = std::max(e, x.window_identity_error);
    return e;
  }

  static Json sk_table(const InflationReport& rep) {
    Json t = Json::array();
    for (const auto& x : rep.records) t.push_back({{"k", num(x.k)}, {"S", num(x.S)}, {"t_argmax", num(x.t_argmax)}});
    return t;
  }

  // 9: hyperbolic inflation
  CheckResult c9() {
    const auto t0 = std::chrono::steady_clock::now();
    const InflationReport rep = inflation_experiment(cfg_.ks, lf_, sc_, shear_, inflation_options());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double werr = max_window_error(rep);
    CheckResult r;
    r.metrics = {{"data", to_string(rep.data)}, {"exponent", num(rep.exponent)},
                 {"strictly_increasing", rep.strictly_increasing}, {"window_identity_error", num(werr)},
                 {"S", sk_table(rep)}};
    r.summary = "data=" + to_string(rep.data) + " S_k increasing=" + (rep.strictly_increasing ? "yes" : "no") +
                " exponent=" + fix(rep.exponent);
    const bool exponent_ok = cfg_.quick || rep.exponent >= 0.25;
    if (cfg_.quick) r.summary += " (exponent not assessed below k=2^12)";
    r.passed = rep.strictly_increasing && exponent_ok && werr <= 1e-12 && secs <= 900.0;
    if (!cfg_.quick && rep.data == InflationData::Profile) {
      InflationOptions o = inflation_options();
      o.data = InflationData::Growing;
      const InflationReport alt = inflation_experiment(cfg_.ks, lf_, sc_, shear_, o);
      r.metrics["growing_data_exponent"] = num(alt.exponent);
      r.metrics["growing_data_strictly_increasing"] = alt.strictly_increasing;
      r.summary += " [growing data: exponent=" + fix(alt.exponent) + "]";
    }
    return r;
  }

  // 10: quadratic-shear oracle
  CheckResult c10() {
    const ShearFlow q = ShearFlow::quadratic(shear_.a());
    PrandtlOptions po;
    po.x = cfg_.x;
    const PrandtlSpectral ps = spectral_constants_prandtl(q, sc_.gamma, po);
    YGridOptions yo = cfg_.ygrid;
    yo.L = 0.0;
    const QuadraticOracle o = quadratic_oracle(cfg_.oracle_k, ps, q, yo, cfg_.evolve);
    CheckResult r;
    r.passed = o.R_norm <= 1e-12 && std::abs(o.slope_ratio - 1.0) <= 0.02;
    r.metrics = {{"k", num(o.k)}, {"R_norm", num(o.R_norm)}, {"slope_ratio", num(o.slope_ratio)},
                 {"max_rel_deviation", num(o.max_rel_deviation)}, {"horizon", num(o.horizon)},
                 {"sigma0_prandtl", num(ps.sc.sigma0)}};
    r.summary = "k=" + fix(o.k, 0) + " |R_k|=" + sci(o.R_norm) + " slope/(sigma0_P sqrt k)=" + fix(o.slope_ratio, 5) +
                " deviation=" + sci(o.max_rel_deviation);
    return r;
  }

  // 11: Prandtl inflation
  CheckResult c11() {
    const PrandtlSpectral& p = prandtl();
    const LayerFunctions lp(p.w, p.sc.mirrored());
    const InflationReport rep = inflation_experiment(cfg_.ks, lp, p.sc, shear_, inflation_options());
    const double werr = max_window_error(rep);
    CheckResult r;
    const bool exponent_ok = cfg_.quick || rep.exponent >= 0.35;
    r.passed = exponent_ok && rep.strictly_increasing && werr <= 1e-12;
    r.metrics = {{"exponent", num(rep.exponent)}, {"strictly_increasing", rep.strictly_increasing},
                 {"window_identity_error", num(werr)}, {"S", sk_table(rep)}};
    r.summary = "S_k increasing=" + std::string(rep.strictly_increasing ? "yes" : "no") + " exponent=" + fix(rep.exponent);
    if (cfg_.quick) r.summary += " (exponent not assessed below k=2^12)";
    return r;
  }

  // 12: Sobolev single-mode demo
  CheckResult c12() {
    CheckResult r;
    r.passed = !cfg_.sobolev_mu.empty();
    Json runs = Json::array();
    for (double mu : cfg_.sobolev_mu) {
      const SobolevDemoReport t =
          sobolev_demo(cfg_.sobolev_m, mu, cfg_.sobolev_delta, cfg_.ks, lf_, sc_, shear_, inflation_options());
      const bool ok = t.feasible && t.ratio >= 1.0 && t.data_norm <= 1.0 + 1e-12 && t.mode_identity_error <= 1e-12;
      r.passed = r.passed && ok;
      runs.push_back({{"mu", num(mu)}, {"feasible", t.feasible}, {"k", num(t.k)}, {"T", num(t.T)},
                      {"data_norm", num(t.data_norm)}, {"sup_norm", num(t.sup_norm)}, {"ratio", num(t.ratio)}});
      r.summary += (r.summary.empty() ? "" : "; ") + std::string("mu=") + fix(mu, 2) + " k=" + fix(t.k, 0) +
                   " sup*delta=" + fix(t.ratio, 3);
    }
    r.metrics = {{"m", num(cfg_.sobolev_m)}, {"delta", num(cfg_.sobolev_delta)}, {"runs", runs}};
    return r;
  }
};

} // namespace

std::vector<CheckResult> run_acceptance(const RunConfig& cfg, const SpectralConstants& sc, const WProfile& w,
                                        const Progress& progress) {
  if (sc.model != Model::Hyperbolic) throw ConfigError("the acceptance suite starts from hyperbolic constants");
  Suite s(cfg, sc, w, progress);
  return s.run();
}

std::string format_check(const CheckResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s %2d ", r.passed ? "PASS" : "FAIL", r.id);
  return head + r.name + ": " + r.summary;
}

Json to_json(const CheckResult& r) {
  return Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"metrics", r.metrics}};
}

} // namespace blayer
