#include "blayer/evolution.hpp"
#include "blayer/error.hpp"
#include "blayer/prandtl.hpp"

#include <algorithm>
#include <cmath>

namespace blayer {

// ---- B and the RK4 system -------------------------------------------------

ComplexProfile apply_B(double k, const ShearFlow& shear, const ComplexProfile& u) {
  u.validate();
  const Grid1D& g = u.grid;
  ComplexProfile v = cumulative_integral(u);
  ComplexProfile out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = g.node(j);
    out[j] = I_UNIT * k * shear.eval(y, 0) * u[j] + k * shear.eval(y, 1) * (-I_UNIT * v[j]);
  }
  return out;
}

double hyperbolic_dt(double k, const ShearFlow& shear, const Grid1D& g, double cfl) {
  const double cU = shear.sup_on(g, 0) + shear.sup_on(g, 1) * g.hi();
  return cfl * std::min(g.h(), cU > 0 ? 1.0 / (k * cU) : INFINITY);
}

namespace {

/// Steps and dt so that steps·dt = T exactly.
std::pair<std::size_t, double> schedule(double T, double dt_rule, double fixed_dt) {
  if (!(T >= 0)) throw ConfigError("negative horizon");
  if (T == 0) return {0, 0.0};
  const double dt0 = fixed_dt > 0 ? fixed_dt : dt_rule;
  if (!(dt0 > 0)) throw ConfigError("non-positive time step");
  auto steps = static_cast<std::size_t>(fixed_dt > 0 ? std::max(1.0, std::round(T / dt0)) : std::ceil(T / dt0 - 1e-9));
  steps = std::max<std::size_t>(steps, 1);
  const double dt = T / static_cast<double>(steps);
  if (fixed_dt > 0 && dt > dt_rule * (1 + 1e-9)) throw ConfigError("fixed time step violates the stability rule");
  return {steps, dt};
}

struct Sampler {
  const Grid1D& g;
  const EvolveConfig& cfg;
  std::size_t every;
  std::size_t j_end;
  Trajectory& tr;

  Sampler(const Grid1D& grid, const EvolveConfig& c, std::size_t steps, Trajectory& t)
      : g(grid), cfg(c), every(std::max<std::size_t>(1, steps / std::max<std::size_t>(1, c.samples))), tr(t) {
    j_end = g.size();
    if (std::isfinite(c.norm_ymax)) j_end = g.nearest(c.norm_ymax) + 1;
  }
  double norm(std::span<const cplx> u) const { return wsup(g, u.subspan(0, j_end), cfg.alpha); }
  void record(std::size_t step, std::size_t steps, double t, std::span<const cplx> u) {
    if (step != 0 && step % every != 0 && step != steps) return;
    const double nv = norm(u);
    if (!(nv < 1e300)) throw BlowUp("weighted norm overflow", t);
    tr.times.push_back(t);
    tr.norms.push_back(nv);
    if (cfg.keep_snapshots) tr.snapshots.emplace_back(u.begin(), u.end());
  }
};

} // namespace

Trajectory evolve(double k, const ShearFlow& shear, const Grid1D& g, const StateVector& init, const Forcing& f,
                  double T, const EvolveConfig& cfg, const StepObserver& obs) {
  const std::size_t n = g.size();
  if (init.u.size() != n || init.w.size() != n) throw InvalidProfile("initial state does not match grid");
  if (n < 5) throw ResolutionError("evolution grid too small");
  const double rule = hyperbolic_dt(k, shear, g, cfg.cfl);
  const auto [steps, dt] = schedule(T, rule, cfg.fixed_dt);

  RVec ikU(n), kU1(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = g.node(j);
    ikU[j] = k * shear.eval(y, 0);
    kU1[j] = k * shear.eval(y, 1);
  }
  const double h = g.h(), ih2 = 1.0 / (h * h);

  CVec u = init.u, w = init.w;
  u.front() = u.back() = 0.0;
  w.front() = w.back() = 0.0;
  CVec fbuf(n), s(n), cum(n);
  std::array<CVec, 4> ku, kw;
  for (int i = 0; i < 4; ++i) ku[i].assign(n, {}), kw[i].assign(n, {});
  CVec ut(n), wt(n);

  // dw = -w - B(u + w) + u'' + f
  auto rhs = [&](double t, const CVec& uu, const CVec& ww, CVec& du, CVec& dw) {
    for (std::size_t j = 0; j < n; ++j) s[j] = uu[j] + ww[j];
    cumulative_integral(h, s, cum);
    if (f) f(t, fbuf);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const cplx B = cplx(0.0, ikU[j]) * s[j] + kU1[j] * cplx(cum[j].imag(), -cum[j].real());
      dw[j] = -ww[j] - B + (uu[j + 1] - 2.0 * uu[j] + uu[j - 1]) * ih2 + (f ? fbuf[j] : cplx{});
      du[j] = ww[j];
    }
    du.front() = du.back() = dw.front() = dw.back() = 0.0;
  };

  Trajectory tr;
  tr.k = k, tr.grid = g, tr.dt = dt, tr.steps = steps;
  Sampler smp(g, cfg, steps, tr);
  smp.record(0, steps, 0.0, u);
  if (obs) obs(0.0, u);
  for (std::size_t st = 0; st < steps; ++st) {
    const double t = dt * static_cast<double>(st);
    rhs(t, u, w, ku[0], kw[0]);
    for (std::size_t j = 0; j < n; ++j) ut[j] = u[j] + 0.5 * dt * ku[0][j], wt[j] = w[j] + 0.5 * dt * kw[0][j];
    rhs(t + 0.5 * dt, ut, wt, ku[1], kw[1]);
    for (std::size_t j = 0; j < n; ++j) ut[j] = u[j] + 0.5 * dt * ku[1][j], wt[j] = w[j] + 0.5 * dt * kw[1][j];
    rhs(t + 0.5 * dt, ut, wt, ku[2], kw[2]);
    for (std::size_t j = 0; j < n; ++j) ut[j] = u[j] + dt * ku[2][j], wt[j] = w[j] + dt * kw[2][j];
    rhs(t + dt, ut, wt, ku[3], kw[3]);
    for (std::size_t j = 0; j < n; ++j) {
      u[j] += dt / 6.0 * (ku[0][j] + 2.0 * ku[1][j] + 2.0 * ku[2][j] + ku[3][j]);
      w[j] += dt / 6.0 * (kw[0][j] + 2.0 * kw[1][j] + 2.0 * kw[2][j] + kw[3][j]);
    }
    const double tn = dt * static_cast<double>(st + 1);
    smp.record(st + 1, steps, tn, u);
    if (obs) obs(tn, u);
  }
  tr.final_state = {std::move(u), std::move(w), T};
  return tr;
}

Forcing profile_forcing(const ProfileSetK& P) {
  const CVec R = P.R.values;
  const cplx lambda = P.lambda;
  const double scale = P.forcing_scale;
  return [R, lambda, scale](double t, std::span<cplx> out) {
    const cplx c = -scale * std::exp(lambda * t);
    for (std::size_t j = 0; j < R.size(); ++j) out[j] = c * R[j];
  };
}

// ---- exact-solution residual ----------------------------------------------

double substitution_residual(const ProfileSetK& P, const SpectralConstants& sc, const ShearFlow& shear, bool skip_critical) {
  if (P.model != Model::Hyperbolic) throw ConfigError("substitution_residual applies to the hyperbolic model");
  const Grid1D& g = P.U.grid;
  const std::size_t n = g.size();
  const double k = P.k;
  const cplx lam = I_UNIT * sc.tau_eff() * std::cbrt(k);
  const ComplexProfile d2 = differentiate(P.U, 2);
  CVec R(n, cplx{});
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double y = g.node(j);
    const cplx inner = lam * P.U[j] + I_UNIT * k * shear.eval(y, 0) * P.U[j] + k * P.V[j] * shear.eval(y, 1);
    R[j] = (lam + 1.0) * inner - d2[j] + P.forcing_scale * P.R[j];
  }
  // node 1's stencil sees the Dirichlet projection of 𝕌_k(0), not the closed form
  std::vector<std::size_t> skip{0, 1, n - 1};
  if (skip_critical) {
    // every stencil touching a straddles the jump of the third derivative
    const std::size_t ia = g.mark_index();
    skip.insert(skip.end(), {ia - 1, ia, ia + 1});
  }
  return wsup(g, R, P.alpha, skip) / P.norm_R_scaled;
}

// ---- forced exact solution -------------------------------------------------

ForcedCheck forced_check(const ProfileSetK& P, const SpectralConstants& sc, const ShearFlow& shear, double T,
                         const EvolveConfig& cfg_in) {
  EvolveConfig cfg = cfg_in;
  cfg.keep_snapshots = true;
  cfg.alpha = P.alpha;
  ForcedCheck out;
  const Grid1D& g = P.U.grid;
  if (P.model == Model::Hyperbolic) {
    StateVector s{P.U.values, P.U.values, 0.0};
    for (auto& v : s.w) v *= P.lambda;
    out.traj = evolve(P.k, shear, g, s, profile_forcing(P), T, cfg);
  } else {
    out.traj = evolve_prandtl(P.k, shear, g, P.U.values, profile_forcing(P), T, cfg);
  }
  const auto& tr = out.traj;
  const std::size_t jend = std::isfinite(cfg.norm_ymax) ? g.nearest(cfg.norm_ymax) + 1 : g.size();
  const double rate = sc.sigma0 * std::pow(P.k, sc.rate_power());
  const double nU = wsup(g, std::span<const cplx>(P.U.values).subspan(0, jend), cfg.alpha);
  CVec diff(jend);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const cplx e = std::exp(P.lambda * tr.times[i]);
    for (std::size_t j = 0; j < jend; ++j) diff[j] = tr.snapshots[i][j] - e * P.U[j];
    const double ex = std::abs(e) * nU;
    out.max_rel_deviation = std::max(out.max_rel_deviation, wsup(g, diff, cfg.alpha) / ex);
    out.max_norm_ratio_error =
        std::max(out.max_norm_ratio_error, std::abs(tr.norms[i] / (std::exp(rate * tr.times[i]) * nU) - 1.0));
  }
  RVec ln(tr.norms.size());
  for (std::size_t i = 0; i < ln.size(); ++i) ln[i] = std::log(tr.norms[i]);
  const LineFit fit = fit_line(tr.times, ln);
  out.slope_ratio = fit.slope / rate;
  out.slope_fit_residual = fit.max_residual / std::max(1e-300, std::abs(ln.back() - ln.front()));
  return out;
}

// ---- Duhamel ----------------------------------------------------------------

DuhamelResult duhamel_check(const ProfileSetK& P, const ShearFlow& shear, double horizon, std::size_t M,
                            const EvolveConfig& cfg_in, bool zero_forcing) {
  if (P.model != Model::Hyperbolic) throw ConfigError("duhamel_check applies to the hyperbolic model");
  if (M < 2 || M % 2 != 0) throw ConfigError("Simpson quadrature needs an even M >= 2");
  const Grid1D& g = P.U.grid;
  const std::size_t n = g.size();
  EvolveConfig cfg = cfg_in;
  cfg.samples = 1;
  cfg.keep_snapshots = false;
  // shared dt: a multiple of M steps covers the horizon, so every impulse run is an integer number of steps
  const double rule = hyperbolic_dt(P.k, shear, g, cfg_in.cfl);
  const double per = std::ceil(horizon / (rule * static_cast<double>(M)) - 1e-9);
  cfg.fixed_dt = horizon / (per * static_cast<double>(M));

  const Forcing f = zero_forcing ? Forcing{} : profile_forcing(P);
  StateVector data{P.U.values, P.U.values, 0.0};
  for (auto& v : data.w) v *= P.lambda;

  std::vector<CVec> results(M + 3);
  const double ds = horizon / static_cast<double>(M);
  parallel_for(M + 3, [&](std::size_t i) {
    if (i == M + 1) {
      results[i] = evolve(P.k, shear, g, data, f, horizon, cfg).final_state.u;
    } else if (i == M + 2) {
      results[i] = evolve(P.k, shear, g, data, {}, horizon, cfg).final_state.u;
    } else {
      const double s = ds * static_cast<double>(i);
      StateVector imp{CVec(n, cplx{}), CVec(n, cplx{}), 0.0};
      if (f) f(s, imp.w);
      results[i] = (i == M) ? imp.u : evolve(P.k, shear, g, imp, {}, horizon - s, cfg).final_state.u;
    }
  });

  CVec rhs = results[M + 2];
  for (std::size_t i = 0; i <= M; ++i) {
    const double wgt = (i == 0 || i == M) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (std::size_t j = 0; j < n; ++j) rhs[j] += ds / 3.0 * wgt * results[i][j];
  }
  CVec diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = results[M + 1][j] - rhs[j];
  DuhamelResult r;
  r.M = M;
  r.dt = cfg.fixed_dt;
  r.lhs_norm = wsup(g, results[M + 1], P.alpha);
  r.discrepancy = wsup(g, diff, P.alpha) / r.lhs_norm;
  return r;
}

// ---- inflation -------------------------------------------------------------

std::string to_string(InflationData d) { return d == InflationData::Profile ? "profile" : "growing"; }

InflationData inflation_data_from_string(const std::string& s) {
  if (s == "profile") return InflationData::Profile;
  if (s == "growing") return InflationData::Growing;
  throw ConfigError("unknown inflation data '" + s + "'");
}

double inflation_window(Model m, double k, double sigma0, double sigma) {
  if (!(sigma > 0 && sigma < sigma0)) throw ConfigError("sigma must lie in (0, sigma0)");
  return m == Model::Hyperbolic ? std::log(k) / (3.0 * (sigma0 - sigma) * std::cbrt(k))
                                : std::log(k) / (2.0 * (sigma0 - sigma) * std::sqrt(k));
}

InflationInitial inflation_initial(const ProfileSetK& P, const SpectralConstants& sc, InflationData d) {
  InflationInitial out;
  const std::size_t n = P.U.size();
  out.state.u = P.U.values;
  out.state.w.assign(n, cplx{});
  if (sc.model == Model::Prandtl) {
    out.norm = wnorm(P.U, {P.alpha, 0});
  } else if (d == InflationData::Profile) {
    out.norm = wnorm(P.U, {P.alpha, 1});
  } else {
    ComplexProfile w(P.U.grid, P.U.values);
    for (auto& v : w.values) v *= P.lambda;
    out.norm = std::max(wnorm(P.U, {P.alpha, 1}), wnorm(w, {P.alpha, 0}));
    out.state.w = w.values;
  }
  for (auto& v : out.state.u) v /= out.norm;
  for (auto& v : out.state.w) v /= out.norm;
  return out;
}

Trajectory evolve_homogeneous(const SpectralConstants& sc, double k, const ShearFlow& shear, const Grid1D& g,
                              const StateVector& init, double T, const EvolveConfig& cfg, const StepObserver& obs) {
  if (sc.model == Model::Hyperbolic) return evolve(k, shear, g, init, {}, T, cfg, obs);
  return evolve_prandtl(k, shear, g, init.u, {}, T, cfg, obs);
}

InflationReport inflation_experiment(const std::vector<double>& ks, const LayerFunctions& lf,
                                     const SpectralConstants& sc, const ShearFlow& shear,
                                     const InflationOptions& opt) {
  if (ks.empty()) throw ConfigError("inflation sweep needs at least one k");
  if (!(opt.sigma_fraction > 0 && opt.sigma_fraction < 1)) throw ConfigError("sigma fraction must be in (0,1)");
  InflationReport rep;
  rep.model = sc.model;
  rep.data = opt.data;
  rep.sigma0 = sc.sigma0;
  rep.sigma = opt.sigma_fraction * sc.sigma0;
  const double p = sc.rate_power();
  rep.records.resize(ks.size());
  const double alpha = opt.evolve.alpha;

  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    const Grid1D y = make_ygrid(sc, shear, k, alpha, opt.ygrid);
    const ProfileSetK P = sc.model == Model::Hyperbolic ? build_profile_set(k, lf, sc, shear, y, alpha)
                                                        : build_profile_set_prandtl(k, lf, sc, shear, y, alpha);
    const InflationInitial init = inflation_initial(P, sc, opt.data);
    InflationRecord& r = rep.records[i];
    r.k = k, r.sigma = rep.sigma;
    r.T = inflation_window(sc.model, k, sc.sigma0, rep.sigma);
    r.window_identity_error = std::abs(std::exp(-(sc.sigma0 - rep.sigma) * std::pow(k, p) * r.T) - std::pow(k, -p));
    r.data_norm = init.norm;
    r.norm_U = P.norm_U, r.norm_R_scaled = P.norm_R_scaled;
    const double kp = std::pow(k, p);
    EvolveConfig cfg = opt.evolve;
    cfg.samples = std::max<std::size_t>(cfg.samples, 200);
    evolve_homogeneous(sc, k, shear, y, init.state, r.T, cfg, [&](double t, std::span<const cplx> u) {
      const double v = std::exp(-rep.sigma * t * kp) * wsup(y, u, alpha);
      if (v > r.S) r.S = v, r.t_argmax = t;
    });
  });

  double c = INFINITY, CR = 0.0;
  for (const auto& r : rep.records) c = std::min(c, r.norm_U), CR = std::max(CR, r.norm_R_scaled);
  const double gap = sc.sigma0 - rep.sigma;
  rep.C_sigma = 0.5 * c * gap / (gap + CR);
  RVec k, S;
  rep.strictly_increasing = true;
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    auto& r = rep.records[i];
    r.C_ref = rep.C_sigma * std::pow(r.k, p);
    k.push_back(r.k), S.push_back(r.S);
    if (i > 0 && !(r.S > rep.records[i - 1].S)) rep.strictly_increasing = false;
  }
  rep.exponent = k.size() >= 2 ? fit_loglog(k, S).slope : 0.0;
  return rep;
}

// ---- Sobolev demo -------------------------------------------------------------

double single_mode_norm(double k, double m, double s, double g_norm) {
  return std::pow(1.0 + k * k, (s - m) / 2.0) * g_norm;
}

SobolevDemoReport sobolev_demo(double m, double mu, double delta, const std::vector<double>& ks,
                               const LayerFunctions& lf, const SpectralConstants& sc, const ShearFlow& shear,
                               const InflationOptions& opt) {
  if (!(mu >= 0 && mu < 1.0 / 3.0)) throw ConfigError("mu must lie in [0, 1/3)");
  SobolevDemoReport rep;
  rep.m = m, rep.mu = mu, rep.delta = delta;
  const double sigma = opt.sigma_fraction * sc.sigma0;
  const double alpha = opt.evolve.alpha;
  std::vector<double> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  for (double k : sorted) {
    const double T = inflation_window(sc.model, k, sc.sigma0, sigma);
    if (T > delta) continue;
    const Grid1D y = make_ygrid(sc, shear, k, alpha, opt.ygrid);
    const ProfileSetK P = sc.model == Model::Hyperbolic ? build_profile_set(k, lf, sc, shear, y, alpha)
                                                        : build_profile_set_prandtl(k, lf, sc, shear, y, alpha);
    const InflationInitial init = inflation_initial(P, sc, opt.data);
    // u(0) = (1+k²)^{-m/2} e^{ikx} u_k(0): its H^m W^{1,∞}_α size equals the unit data norm
    const double unit = sc.model == Model::Hyperbolic && opt.data == InflationData::Growing
                            ? 1.0
                            : wnorm(ComplexProfile(y, init.state.u), {alpha, sc.model == Model::Hyperbolic ? 1 : 0});
    double sup = 0.0;
    evolve_homogeneous(sc, k, shear, y, init.state, delta, opt.evolve, [&](double, std::span<const cplx> u) {
      sup = std::max(sup, wsup(y, u, alpha));
    });
    rep.k = k, rep.T = T;
    rep.data_norm = single_mode_norm(k, m, m, unit);
    rep.sup_norm = single_mode_norm(k, m, m - mu, sup);
    rep.ratio = rep.sup_norm * delta;
    rep.mode_identity_error = std::abs(single_mode_norm(k, m, m, 1.0) - 1.0);
    if (rep.ratio >= 1.0) {
      rep.feasible = true;
      return rep;
    }
  }
  return rep;
}

} // namespace blayer
