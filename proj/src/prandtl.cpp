#include "blayer/prandtl.hpp"
#include "blayer/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blayer {

// ---- matching root ---------------------------------------------------------

cplx prandtl_seed(cplx gamma_hyperbolic) { return gamma_hyperbolic * std::polar(1.0, -std::numbers::pi / 12.0); }

PrandtlSpectral spectral_constants_prandtl(const ShearFlow& shear, cplx gamma_hyperbolic, const PrandtlOptions& opt) {
  shear.require_prandtl_admissible();
  const cplx c = prandtl_coefficient();
  PrandtlSpectral out;
  out.seed = prandtl_seed(gamma_hyperbolic);
  cplx g0 = out.seed, g1 = out.seed * (1.0 + opt.perturbation);
  cplx m0 = shoot_match(g0, c, opt.x).mismatch, m1 = shoot_match(g1, c, opt.x).mismatch;
  bool converged = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    if (m1 == m0) break;
    const cplx g2 = g1 - m1 * (g1 - g0) / (m1 - m0);
    if (!std::isfinite(g2.real()) || !std::isfinite(g2.imag()) || !(g2.imag() < 0))
      throw NonConvergence("secant left the lower half plane");
    g0 = g1, m0 = m1;
    g1 = g2;
    m1 = shoot_match(g1, c, opt.x).mismatch;
    if (std::abs(g1 - g0) <= opt.secant_tol * std::max(1.0, std::abs(g1))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("Prandtl secant did not converge");
  out.x = solve_X(g1, c, opt.x, true);
  out.w = build_W(out.x);
  out.defect = out.x.defect;
  out.defect_perturbed = shoot_match(g1 * (1.0 + opt.perturbation), c, opt.x).defect;

  const double U2 = shear.curvature();
  SpectralConstants& sc = out.sc;
  sc.model = Model::Prandtl;
  sc.gamma = g1;
  sc.alpha = std::norm(g1); // |γ_P| = α^{1/2}
  sc.scale = std::pow(std::abs(U2) / 2.0, 0.25);
  sc.tau = sc.scale * sc.scale * g1;
  sc.curvature_sign = U2 > 0 ? 1 : -1;
  sc.sigma0 = -sc.tau_eff().imag();
  return out;
}

// ---- profiles ---------------------------------------------------------------

ProfileSetK build_profile_set_prandtl(double k, const LayerFunctions& lf, const SpectralConstants& sc,
                                      const ShearFlow& shear, const Grid1D& y, double alpha) {
  if (!(k >= 1)) throw ConfigError("frequency k must be >= 1");
  if (sc.model != Model::Prandtl) throw ConfigError("Prandtl profiles need Prandtl constants");
  const std::size_t ia = y.mark_index();
  const double a = shear.a();
  if (std::abs(y.node(ia) - a) > 1e-12 * y.h() + 1e-14) throw ResolutionError("critical point not on the y grid");
  if (layer_width(sc, k) / y.h() < 8)
    throw ResolutionError("layer at k=" + std::to_string(static_cast<long long>(k)) + " underresolved");

  const double U2 = shear.curvature(), Ua = shear.eval(a, 0);
  const cplx tau = sc.tau_eff(), I = I_UNIT;
  const double c = sc.scale * std::pow(k, 0.25), rk = std::sqrt(k);
  const std::size_t n = y.size();

  ProfileSetK P;
  P.model = Model::Prandtl;
  P.k = k, P.alpha = alpha;
  P.U = ComplexProfile(y), P.V = ComplexProfile(y), P.R = ComplexProfile(y);
  P.F1 = ComplexProfile(y), P.F2 = ComplexProfile(y);
  P.lambda = I * tau * rk - I * k * Ua;
  P.forcing_scale = k;
  ComplexProfile limit(y);

  for (std::size_t j = 0; j < n; ++j) {
    const double yy = y.node(j), e = yy - a;
    const double H = j >= ia ? 1.0 : 0.0;
    const cplx wmh = lf.W_minus_H(c * e), wp = lf.Wp(c * e), W = wmh + H;
    const double u1 = shear.eval(yy, 1), u3 = shear.eval(yy, 3);
    const double q = U2 * e * e / 2.0, dq = U2 * e;
    const double r = shear.eval(yy, 0) - Ua - q, dr = u1 - dq;
    const cplx Pk = tau / rk + q;
    P.U[j] = I * u1 * H + I * U2 * e * wmh + I * c * Pk * wp;
    P.V[j] = r * H + Pk * W;
    const cplx f1 = r * dq - dr * Pk, f2 = c * r * Pk;
    P.F1[j] = f1, P.F2[j] = f2;
    P.R[j] = I / k * u3 * H + wmh * f1 + wp * f2;
    limit[j] = I * u1 * H;
  }
  P.U[0] = 0.0;

  P.V_int = cumulative_integral(P.U);
  for (auto& v : P.V_int.values) v *= -I;
  CVec diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = P.V[j] - P.V_int[j];
  P.V_discrepancy = wsup(y, diff, alpha);
  P.norm_U = wnorm(P.U, {alpha, 0});
  P.norm_R_scaled = P.forcing_scale * wnorm(P.R, {alpha, 0});
  for (std::size_t j = 0; j < n; ++j) diff[j] = P.U[j] - limit[j];
  P.limit_deviation = wsup(y, diff, alpha);
  return P;
}

// ---- IMEX evolution ----------------------------------------------------------

double prandtl_dt(double k, const ShearFlow& shear, const Grid1D& g, double cfl) {
  const double cU = shear.sup_on(g, 0, shear.eval(shear.a(), 0)) + shear.sup_on(g, 1) * g.hi();
  return std::min(cU > 0 ? cfl / (k * cU) : INFINITY, 0.5 * g.h());
}

namespace {

// IMEX-SSP3(4,3,3): L-stable DIRK with constant diagonal, SSP3 explicit part
struct Tableau {
  static constexpr double al = 0.24169426078821, be = 0.06042356519705, et = 0.12915286960590;
  static constexpr double AI[4][4] = {{al, 0, 0, 0}, {-al, al, 0, 0}, {0, 1 - al, al, 0}, {be, et, 0.5 - be - et - al, al}};
  static constexpr double AE[4][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0.25, 0.25, 0}};
  static constexpr double b[4] = {0, 1.0 / 6, 1.0 / 6, 2.0 / 3};
  static constexpr double cE[4] = {0, 0, 1, 0.5};
};

} // namespace

Trajectory evolve_prandtl(double k, const ShearFlow& shear, const Grid1D& g, const CVec& u0, const Forcing& f,
                          double T, const EvolveConfig& cfg, const StepObserver& obs) {
  const std::size_t n = g.size();
  if (u0.size() != n) throw InvalidProfile("initial state does not match grid");
  if (n < 5) throw ResolutionError("evolution grid too small");
  if (!(T >= 0)) throw ConfigError("negative horizon");
  const double rule = prandtl_dt(k, shear, g, cfg.cfl_parabolic);
  std::size_t steps = 0;
  double dt = 0.0;
  if (T > 0) {
    if (cfg.fixed_dt > 0) {
      if (cfg.fixed_dt > rule * (1 + 1e-9)) throw ConfigError("fixed time step violates the stability rule");
      steps = static_cast<std::size_t>(std::max(1.0, std::round(T / cfg.fixed_dt)));
    } else {
      steps = static_cast<std::size_t>(std::max(1.0, std::ceil(T / rule - 1e-9)));
    }
    dt = T / static_cast<double>(steps);
  }

  // frame moving with U_s(a): w = e^{ikU_s(a)t} u
  const double Ua = shear.eval(shear.a(), 0);
  RVec kU(n), kU1(n);
  for (std::size_t j = 0; j < n; ++j) {
    kU[j] = k * (shear.eval(g.node(j), 0) - Ua);
    kU1[j] = k * shear.eval(g.node(j), 1);
  }
  const double h = g.h(), ih2 = 1.0 / (h * h);
  const double da = dt * Tableau::al;
  CVec lo(n, -da * ih2), di(n, 1.0 + 2.0 * da * ih2), up(n, -da * ih2);
  lo[0] = up[0] = lo[n - 1] = up[n - 1] = 0.0;
  di[0] = di[n - 1] = 1.0;
  const Tridiagonal solver(lo, di, up);

  CVec u = u0;
  u.front() = u.back() = 0.0;
  std::array<CVec, 4> Fe, Fi, Y;
  for (int i = 0; i < 4; ++i) Fe[i].assign(n, {}), Fi[i].assign(n, {}), Y[i].assign(n, {});
  CVec cum(n), fbuf(n), rhs(n), lab(n);

  auto explicit_op = [&](double t, const CVec& v, CVec& out) {
    cumulative_integral(h, v, cum);
    if (f) {
      f(t, fbuf);
      const cplx ph = std::exp(I_UNIT * (k * Ua * t));
      for (auto& x : fbuf) x *= ph;
    }
    for (std::size_t j = 1; j + 1 < n; ++j)
      out[j] = cplx(0.0, -kU[j]) * v[j] + kU1[j] * cplx(-cum[j].imag(), cum[j].real()) + (f ? fbuf[j] : cplx{});
    out.front() = out.back() = 0.0;
  };
  auto lab_frame = [&](double t, const CVec& v) -> std::span<const cplx> {
    if (Ua == 0.0) return v;
    const cplx ph = std::exp(-I_UNIT * (k * Ua * t));
    for (std::size_t j = 0; j < n; ++j) lab[j] = ph * v[j];
    return lab;
  };

  Trajectory tr;
  tr.k = k, tr.grid = g, tr.dt = dt, tr.steps = steps;
  const std::size_t every = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, cfg.samples));
  const std::size_t jend = std::isfinite(cfg.norm_ymax) ? g.nearest(cfg.norm_ymax) + 1 : n;
  auto record = [&](std::size_t st, double t) {
    if (st != 0 && st % every != 0 && st != steps) return;
    const auto v = lab_frame(t, u);
    const double nv = wsup(g, v.subspan(0, jend), cfg.alpha);
    if (!(nv < 1e300)) throw BlowUp("weighted norm overflow", t);
    tr.times.push_back(t);
    tr.norms.push_back(nv);
    if (cfg.keep_snapshots) tr.snapshots.emplace_back(v.begin(), v.end());
  };
  record(0, 0.0);
  if (obs) obs(0.0, lab_frame(0.0, u));

  for (std::size_t st = 0; st < steps; ++st) {
    const double t = dt * static_cast<double>(st);
    for (int i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cplx s = u[j];
        for (int m = 0; m < i; ++m) s += dt * (Tableau::AE[i][m] * Fe[m][j] + Tableau::AI[i][m] * Fi[m][j]);
        rhs[j] = s;
      }
      rhs.front() = rhs.back() = 0.0;
      Y[i] = rhs;
      solver.solve(Y[i]);
      for (std::size_t j = 0; j < n; ++j) Fi[i][j] = (Y[i][j] - rhs[j]) / da;
      if (i > 0) explicit_op(t + Tableau::cE[i] * dt, Y[i], Fe[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int i = 1; i < 4; ++i) s += Tableau::b[i] * (Fe[i][j] + Fi[i][j]);
      u[j] += dt * s;
    }
    u.front() = u.back() = 0.0;
    const double tn = dt * static_cast<double>(st + 1);
    record(st + 1, tn);
    if (obs) obs(tn, lab_frame(tn, u));
  }
  const auto v = lab_frame(T, u);
  tr.final_state = {CVec(v.begin(), v.end()), CVec{}, T};
  return tr;
}

// ---- quadratic-shear exact solution --------------------------------------------

QuadraticOracle quadratic_oracle(double k, const PrandtlSpectral& ps, const ShearFlow& shear, const YGridOptions& yo_in,
                                 const EvolveConfig& cfg_in) {
  if (shear.family() != ShearFamily::Quadratic) throw ConfigError("quadratic oracle needs the quadratic shear");
  YGridOptions yo = yo_in;
  if (!(yo.L > 0)) yo.L = shear.a() + 8.0;
  const Grid1D y = make_ygrid(ps.sc, shear, k, 0.0, yo);
  const LayerFunctions lf(ps.w, ps.sc.mirrored());
  const ProfileSetK P = build_profile_set_prandtl(k, lf, ps.sc, shear, y, 0.0);
  QuadraticOracle q;
  q.k = k;
  q.R_norm = wnorm(P.R, {0.0, 0});
  q.horizon = 1.0 / (ps.sc.sigma0 * std::sqrt(k));
  EvolveConfig cfg = cfg_in;
  cfg.alpha = 0.0;
  cfg.norm_ymax = 0.9 * y.hi();
  ForcedCheck fc = forced_check(P, ps.sc, shear, q.horizon, cfg);
  q.slope_ratio = fc.slope_ratio;
  q.max_rel_deviation = fc.max_rel_deviation;
  q.traj = std::move(fc.traj);
  return q;
}

} // namespace blayer
