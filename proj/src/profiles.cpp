#include "blayer/profiles.hpp"
#include "blayer/error.hpp"
#include "blayer/prandtl.hpp"

#include <algorithm>
#include <cmath>

namespace blayer {

// ---- V --------------------------------------------------------------------

namespace {

// one-sided limits at index c from the side `dir` (+1 right, -1 left), never using node c itself:
// the value by quadratic extrapolation from three nodes, derivatives from the quartic through five
struct OneSided {
  cplx v, d1, d2;
};

OneSided one_sided(const ComplexProfile& f, std::size_t c, int dir) {
  const double h = f.grid.h() * dir;
  auto at = [&](int m) { return f[static_cast<std::size_t>(static_cast<long>(c) + dir * m)]; };
  static constexpr double D1[5] = {-77.0 / 12, 107.0 / 6, -39.0 / 2, 61.0 / 6, -25.0 / 12};
  static constexpr double D2[5] = {71.0 / 12, -59.0 / 3, 49.0 / 2, -41.0 / 3, 35.0 / 12};
  OneSided o;
  o.v = 3.0 * at(1) - 3.0 * at(2) + at(3);
  for (int m = 1; m <= 5; ++m) {
    o.d1 += D1[m - 1] * at(m);
    o.d2 += D2[m - 1] * at(m);
  }
  o.d1 /= h;
  o.d2 /= h * h;
  return o;
}

} // namespace

VProfile build_V(const WProfile& w, const SpectralConstants& sc, const ShearFlow& shear, bool check, double tol) {
  if (sc.model != Model::Hyperbolic) throw ConfigError("the corrector V is built for the hyperbolic layer");
  const double U2 = shear.curvature();
  const double s = sc.scale;
  const cplx tau = sc.tau_eff();
  // the prefactor comes from the layer equation of W: (U''/2)(z̃² - γ/s²), so [V] = -τ only when the
  // stored τ agrees with the γ that produced W
  const cplx gamma_layer = sc.mirrored() ? std::conj(w.gamma) : w.gamma;
  const cplx shift = -U2 * gamma_layer / (2.0 * s * s);
  const Grid1D& zg = w.W.grid;
  const std::size_t c = zg.mark_index();
  // z̃ = z / s keeps the origin on-grid and needs no interpolation
  const Grid1D g = Grid1D::symmetric(zg.hi() / s, zg.size() - 1);
  VProfile out;
  out.V = ComplexProfile(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double zt = g.node(j);
    const cplx wmh = j < c ? (sc.mirrored() ? std::conj(w.W[j]) : w.W[j])
                           : (sc.mirrored() ? std::conj(w.Wm1[j]) : w.Wm1[j]);
    out.V[j] = (shift + U2 * zt * zt / 2.0) * wmh;
  }
  const OneSided L = one_sided(out.V, c, -1), R = one_sided(out.V, c, +1);
  JumpReport& J = out.jumps;
  J.V_minus = L.v, J.V_plus = R.v;
  J.dV_minus = L.d1, J.dV_plus = R.d1;
  J.d2V_minus = L.d2, J.d2V_plus = R.d2;
  J.jump_V = R.v - L.v;
  J.jump_dV = R.d1 - L.d1;
  J.jump_d2V = R.d2 - L.d2;
  J.err_V = std::abs(J.jump_V + tau) / std::abs(tau);
  J.err_dV = std::abs(J.jump_dV) / (std::abs(tau) * s);
  J.err_d2V = std::abs(J.jump_d2V + U2) / std::abs(U2);
  if (check && (J.err_V > tol || J.err_dV > tol || J.err_d2V > tol))
    throw SpectralFailure("jump conditions violated (inconsistent spectral inputs)");
  return out;
}

// ---- grids ----------------------------------------------------------------

double layer_width(const SpectralConstants& sc, double k) {
  return std::pow(k, sc.model == Model::Hyperbolic ? -1.0 / 3.0 : -0.25) / sc.scale;
}

Grid1D make_ygrid(const SpectralConstants& sc, const ShearFlow& shear, double k, double alpha, const YGridOptions& o) {
  const double a = shear.a();
  const double L = o.L > 0 ? o.L : a + std::max(alpha > 0 ? 10.0 / alpha : 0.0, 6.0);
  const double width = layer_width(sc, k);
  const double h = std::min(o.h_max, width / o.nodes_per_layer);
  if (width / h < o.min_nodes_per_layer)
    throw ResolutionError("layer at k=" + std::to_string(static_cast<long long>(k)) + " underresolved");
  return Grid1D::with_node_at(0.0, L, a, h);
}

// ---- hyperbolic profile set ------------------------------------------------

ProfileSetK build_profile_set(double k, const LayerFunctions& lf, const SpectralConstants& sc, const ShearFlow& shear,
                              const Grid1D& y, double alpha) {
  if (!(k >= 1)) throw ConfigError("frequency k must be >= 1");
  if (sc.model != Model::Hyperbolic) throw ConfigError("hyperbolic profiles need hyperbolic constants");
  const std::size_t ia = y.mark_index();
  const double a = shear.a();
  if (std::abs(y.node(ia) - a) > 1e-12 * y.h() + 1e-14) throw ResolutionError("critical point not on the y grid");
  const double width = layer_width(sc, k);
  if (width / y.h() < 8) throw ResolutionError("layer at k=" + std::to_string(static_cast<long long>(k)) + " underresolved");

  const double U2 = shear.curvature(), s = sc.scale;
  const cplx tau = sc.tau_eff(), I = I_UNIT;
  const double k13 = std::cbrt(k), D = 1.0 / k13;
  const std::size_t n = y.size();

  ProfileSetK P;
  P.model = Model::Hyperbolic;
  P.k = k, P.alpha = alpha;
  P.U = ComplexProfile(y), P.V = ComplexProfile(y), P.R = ComplexProfile(y);
  P.F1 = ComplexProfile(y), P.F2 = ComplexProfile(y);
  P.lambda = I * tau * k13;
  P.forcing_scale = k * k13;
  ComplexProfile limit(y);

  for (std::size_t j = 0; j < n; ++j) {
    const double yy = y.node(j), e = yy - a;
    const double H = j >= ia ? 1.0 : 0.0;
    const double zeta = s * k13 * e;
    const cplx wmh = lf.W_minus_H(zeta), wp = lf.Wp(zeta), W = wmh + H;
    const double u0 = shear.eval(yy, 0), u1 = shear.eval(yy, 1), u3 = shear.eval(yy, 3);
    // U_s = q + r with q the osculating parabola at a
    const double q = U2 * e * e / 2.0, dq = U2 * e;
    const double r = u0 - q, dr = u1 - dq;
    const cplx Pk = D * D * tau + q;
    P.U[j] = I * u1 * H + I * U2 * e * wmh + I * s * k13 * Pk * wp;
    P.V[j] = r * H + Pk * W;
    const cplx f1 = (I * tau + D) * (r * dq - dr * Pk);
    const cplx f2 = s * k13 * ((I * tau + D) * r * Pk + D * Pk * Pk);
    P.F1[j] = f1, P.F2[j] = f2;
    P.R[j] = I * D * D * D * D * u3 * H + wmh * f1 + wp * f2;
    limit[j] = I * u1 * H;
  }
  P.U[0] = 0.0; // Dirichlet projection

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

// ---- sweep ----------------------------------------------------------------

BoundsSummary bounds_sweep(const std::vector<double>& ks, const LayerFunctions& lf, const SpectralConstants& sc,
                           const ShearFlow& shear, double alpha, const YGridOptions& o) {
  if (ks.empty()) throw ConfigError("bounds sweep needs at least one k");
  BoundsSummary S;
  S.rows.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const Grid1D y = make_ygrid(sc, shear, ks[i], alpha, o);
    const ProfileSetK P = sc.model == Model::Hyperbolic ? build_profile_set(ks[i], lf, sc, shear, y, alpha)
                                                        : build_profile_set_prandtl(ks[i], lf, sc, shear, y, alpha);
    S.rows[i] = {ks[i], P.norm_U, P.norm_R_scaled, P.limit_deviation};
  });
  S.min_U = S.max_U = S.rows.front().norm_U;
  for (const auto& r : S.rows) {
    S.min_U = std::min(S.min_U, r.norm_U);
    S.max_U = std::max(S.max_U, r.norm_U);
    S.max_R_scaled = std::max(S.max_R_scaled, r.norm_R_scaled);
  }
  S.ratio_U = S.max_U / S.min_U;
  const double kmax = *std::max_element(ks.begin(), ks.end());
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : S.rows)
    if (r.k >= kmax / 2) lo = std::min(lo, r.norm_R_scaled), hi = std::max(hi, r.norm_R_scaled);
  S.top_octave_R_factor = hi / lo;
  {
    const Grid1D y = make_ygrid(sc, shear, kmax, alpha, o);
    ComplexProfile lim(y);
    for (std::size_t j = y.mark_index(); j < y.size(); ++j) lim[j] = I_UNIT * shear.eval(y.node(j), 1);
    S.limit_norm = wnorm(lim, {alpha, 0});
  }
  if (S.rows.size() >= 2) {
    RVec k, d;
    for (const auto& r : S.rows) k.push_back(r.k), d.push_back(r.limit_deviation);
    S.limit_rate = fit_loglog(k, d).slope;
  }
  return S;
}

} // namespace blayer
