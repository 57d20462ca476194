#include "blayer/spectral.hpp"
#include "blayer/error.hpp"

#include <boost/numeric/odeint.hpp>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace blayer {

namespace odeint = boost::numeric::odeint;

std::string to_string(Model m) { return m == Model::Hyperbolic ? "hyperbolic" : "prandtl"; }

Model model_from_string(const std::string& s) {
  if (s == "hyperbolic") return Model::Hyperbolic;
  if (s == "prandtl") return Model::Prandtl;
  throw ConfigError("unknown model '" + s + "'");
}

// ---- eigenproblem ---------------------------------------------------------

namespace {

struct TriCoeffs {
  RVec diag, lower, upper; // row j couples j-1 (lower), j (diag), j+1 (upper); interior rows only
};

TriCoeffs eigen_operator(double xbar, std::size_t n) {
  const double h = 2.0 * xbar / static_cast<double>(n);
  const std::size_t m = n - 1;
  TriCoeffs t{RVec(m), RVec(m), RVec(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const double x = -xbar + h * static_cast<double>(i + 1);
    const double w = 1.0 / (x * x + 1.0);
    const double p = w, q = 6.0 * x * w * w, r = 6.0 * w * w;
    t.diag[i] = -2.0 * p / (h * h) + r;
    t.lower[i] = p / (h * h) - q / (2.0 * h);
    t.upper[i] = p / (h * h) + q / (2.0 * h);
  }
  return t;
}

struct RawEigen {
  RVec alphas;
  std::vector<RVec> vectors; // eigenvectors of A (not of the symmetrized matrix), interior nodes
};

RawEigen raw_eigen(double xbar, std::size_t n, double lo, double hi, bool vectors) {
  if (n % 2 != 0) throw ConfigError("eigenproblem interval count must be even");
  const TriCoeffs t = eigen_operator(xbar, n);
  const std::size_t m = t.diag.size();
  // diagonal similarity D A D^{-1} is symmetric when upper_j * lower_{j+1} > 0
  RVec off(m - 1), d(m, 1.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double pr = t.upper[i] * t.lower[i + 1];
    if (!(pr > 0.0)) throw ResolutionError("eigenproblem grid too coarse to symmetrize");
    off[i] = std::sqrt(pr);
    d[i + 1] = d[i] * std::sqrt(t.upper[i] / t.lower[i + 1]);
  }
  RVec diag = t.diag;
  lapack_int found = 0, nsplit = 0;
  RVec w(m);
  std::vector<lapack_int> iblock(m), isplit(m);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dstebz('V', 'E', static_cast<lapack_int>(m), lo, hi, 0, 0, abstol, diag.data(), off.data(),
                                   &found, &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0) throw NonConvergence("dstebz failed with info " + std::to_string(info));
  RawEigen out;
  out.alphas.assign(w.begin(), w.begin() + found);
  if (vectors && found > 0) {
    std::vector<double> z(m * static_cast<std::size_t>(found));
    std::vector<lapack_int> ifail(static_cast<std::size_t>(found));
    info = LAPACKE_dstein(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), diag.data(), off.data(), found, w.data(),
                          iblock.data(), isplit.data(), z.data(), static_cast<lapack_int>(m), ifail.data());
    if (info != 0) throw NonConvergence("dstein failed with info " + std::to_string(info));
    for (lapack_int c = 0; c < found; ++c) {
      RVec v(m);
      for (std::size_t i = 0; i < m; ++i) v[i] = z[static_cast<std::size_t>(c) * m + i] / d[i];
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

ComplexProfile embed(const RVec& interior, double xbar, std::size_t n) {
  ComplexProfile f(Grid1D::symmetric(xbar, n));
  double peak = 0.0, sign = 1.0;
  for (std::size_t i = 0; i < interior.size(); ++i)
    if (std::abs(interior[i]) > peak) peak = std::abs(interior[i]), sign = interior[i] > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < interior.size(); ++i) f[i + 1] = sign * interior[i] / peak;
  return f;
}

} // namespace

double envelope_ratio(const ComplexProfile& f, double rho) {
  const auto& g = f.grid;
  const double half = 0.5 * std::max(std::abs(g.lo()), std::abs(g.hi()));
  const double sr = std::sqrt(rho);
  double ref = 0.0, worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    if (std::abs(x) < half - 1e-12) continue;
    const double v = std::abs(f[j]) * std::exp(sr * x * x / 4.0);
    worst = std::max(worst, v);
    if (std::abs(std::abs(x) - half) < 0.5 * g.h() + 1e-12) ref = std::max(ref, v);
  }
  if (ref == 0.0) return worst == 0.0 ? 0.0 : INFINITY;
  return worst / ref;
}

Eigenpair solve_eigenproblem(const EigenOptions& opt) {
  if (opt.xbar < 8.0) throw ConfigError("eigenproblem half-width must be >= 8");
  if (opt.n < 500) throw ConfigError("eigenproblem needs >= 500 intervals");
  const RawEigen raw = raw_eigen(opt.xbar, opt.n, opt.window_lo, opt.window_hi, true);

  Eigenpair out;
  out.options = opt;
  int chosen = -1;
  for (std::size_t c = 0; c < raw.alphas.size(); ++c) {
    EigenCandidate cand;
    cand.alpha = raw.alphas[c];
    cand.envelope_ratio = envelope_ratio(embed(raw.vectors[c], opt.xbar, opt.n), cand.alpha);
    cand.decays = std::isfinite(cand.envelope_ratio) && cand.envelope_ratio <= 10.0;
    if (cand.decays && chosen < 0) chosen = static_cast<int>(c); // ascending order: smallest α
    out.candidates.push_back(cand);
  }
  if (chosen < 0) throw SpectralFailure("no positive eigenvalue with a decaying eigenvector in the window");

  out.alpha_discrete = raw.alphas[static_cast<std::size_t>(chosen)];
  out.envelope_ratio = out.candidates[static_cast<std::size_t>(chosen)].envelope_ratio;
  out.f = embed(raw.vectors[static_cast<std::size_t>(chosen)], opt.xbar, opt.n);

  // residual of the discrete pair
  const TriCoeffs t = eigen_operator(opt.xbar, opt.n);
  double res = 0.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const std::size_t j = i + 1;
    const cplx af = t.lower[i] * out.f[j - 1] + t.diag[i] * out.f[j] + t.upper[i] * out.f[j + 1];
    res = std::max(res, std::abs(af - out.alpha_discrete * out.f[j]));
  }
  out.residual = res; // sup|f| = 1

  // parity: compare f(x) with ±f(-x)
  double even = 0.0, odd = 0.0;
  const std::size_t nn = out.f.size();
  for (std::size_t j = 0; j < nn; ++j) {
    even = std::max(even, std::abs(out.f[j] - out.f[nn - 1 - j]));
    odd = std::max(odd, std::abs(out.f[j] + out.f[nn - 1 - j]));
  }
  out.parity = even <= odd ? 1 : -1;
  out.parity_defect = std::min(even, odd);

  out.alpha = out.alpha_discrete;
  if (opt.extrapolate) {
    const RawEigen fine = raw_eigen(opt.xbar, 2 * opt.n, opt.window_lo, opt.window_hi, false);
    if (fine.alphas.empty()) throw SpectralFailure("eigenvalue lost under refinement");
    double best = fine.alphas.front();
    for (double a : fine.alphas)
      if (std::abs(a - out.alpha_discrete) < std::abs(best - out.alpha_discrete)) best = a;
    out.alpha_fine = best;
    // second-order scheme: error ~ C h², so (4 α_{h/2} - α_h)/3 cancels the leading term
    out.alpha = (4.0 * best - out.alpha_discrete) / 3.0;
  }
  if (out.residual > opt.residual_tol) throw NonConvergence("eigen residual " + std::to_string(out.residual));
  return out;
}

// ---- shooting -------------------------------------------------------------

namespace {

using State = std::array<double, 4>;

struct XOde {
  cplx g, c;
  void operator()(const State& s, State& ds, double z) const {
    const cplx X{s[0], s[1]}, P{s[2], s[3]};
    const cplx q = z * z - g;
    const cplx Xpp = (c * q * q * X - 6.0 * z * P - 6.0 * X) / q;
    ds = {P.real(), P.imag(), Xpp.real(), Xpp.imag()};
  }
};

/// Decaying WKB slope X'/X at z: the root of c(z²-γ) with positive real part, signed so |X| decays outward.
cplx wkb_slope(cplx g, cplx c, double z) {
  cplx r = std::sqrt(c * (z * z - g));
  if (r.real() < 0) r = -r;
  return z > 0 ? -r : r;
}

State start_state(cplx g, cplx c, double z) {
  const cplx p = wkb_slope(g, c, z);
  return {1.0, 0.0, p.real(), p.imag()};
}

auto make_stepper(const XOptions& o) {
  return odeint::make_controlled(std::max(o.atol, 1e-300), o.rtol, odeint::runge_kutta_fehlberg78<State>());
}

void check_finite(const State& s) {
  for (double v : s)
    if (!std::isfinite(v)) throw NonConvergence("shooting produced non-finite values");
}

double angle_defect(cplx x1, cplx d1, cplx x2, cplx d2, double scale) {
  const cplx det = (x1 * d2 - x2 * d1) / scale;
  const double n1 = std::sqrt(std::norm(x1) + std::norm(d1 / scale));
  const double n2 = std::sqrt(std::norm(x2) + std::norm(d2 / scale));
  return std::abs(det) / (n1 * n2);
}

cplx log_mismatch(cplx x1, cplx d1, cplx x2, cplx d2) {
  // branch 1 = right, 2 = left; use whichever of X, X' dominates for conditioning
  if (std::abs(x1) * 1e3 >= std::abs(d1)) return d2 / x2 - d1 / x1;
  return x1 / d1 - x2 / d2;
}

} // namespace

Matching shoot_match(cplx gamma, cplx coef, const XOptions& opt) {
  if (!(gamma.imag() < 0)) throw SpectralFailure("shooting requires Im(gamma) < 0");
  const XOde ode{gamma, coef};
  const double Z = opt.z_half;
  State r = start_state(gamma, coef, Z), l = start_state(gamma, coef, -Z);
  odeint::integrate_adaptive(make_stepper(opt), ode, r, Z, 0.0, -1e-3);
  odeint::integrate_adaptive(make_stepper(opt), ode, l, -Z, 0.0, 1e-3);
  check_finite(r), check_finite(l);
  Matching m;
  m.x0_right = {r[0], r[1]}, m.dx0_right = {r[2], r[3]};
  m.x0_left = {l[0], l[1]}, m.dx0_left = {l[2], l[3]};
  const double scale = std::sqrt(std::abs(gamma));
  m.defect = angle_defect(m.x0_right, m.dx0_right, m.x0_left, m.dx0_left, scale);
  m.mismatch = log_mismatch(m.x0_right, m.dx0_right, m.x0_left, m.dx0_left);
  return m;
}

XProfile solve_X(cplx gamma, cplx coef, const XOptions& opt, bool check) {
  if (!(gamma.imag() < 0)) throw SpectralFailure("solve_X requires Im(gamma) < 0");
  const double Z = opt.z_half;
  if (std::exp(-std::sqrt(std::abs(gamma)) * Z * Z / 4.0) > 1e-12 * 10)
    throw ConfigError("z window too small for the decay envelope");
  const Grid1D g = Grid1D::symmetric(Z, opt.intervals);
  const std::size_t mid = g.mark_index(), n = g.size();
  const XOde ode{gamma, coef};

  CVec X(n), dX(n);
  auto sample = [&](std::size_t lo, std::size_t hi, bool rightward) {
    // integrate from the outer end of [lo, hi] toward the origin, recording each node
    std::vector<double> times;
    if (rightward)
      for (std::size_t j = hi + 1; j-- > lo;) times.push_back(g.node(j));
    else
      for (std::size_t j = lo; j <= hi; ++j) times.push_back(g.node(j));
    times.front() = rightward ? Z : -Z;
    times.back() = 0.0;
    State s = start_state(gamma, coef, times.front());
    std::size_t idx = 0;
    auto obs = [&](const State& st, double) {
      const std::size_t j = rightward ? hi - idx : lo + idx;
      X[j] = {st[0], st[1]};
      dX[j] = {st[2], st[3]};
      ++idx;
    };
    odeint::integrate_times(make_stepper(opt), ode, s, times.begin(), times.end(), rightward ? -1e-3 : 1e-3, obs);
    check_finite(s);
  };
  sample(mid, n - 1, true);
  const cplx xr = X[mid], dr = dX[mid];
  sample(0, mid, false);
  const cplx xl = X[mid], dl = dX[mid];

  XProfile out;
  out.gamma = gamma, out.coef = coef;
  out.defect = angle_defect(xr, dr, xl, dl, std::sqrt(std::abs(gamma)));
  // rescale the left branch so it meets the right one at 0
  const cplx ratio = std::abs(xl) >= std::abs(dl) / std::sqrt(std::abs(gamma)) ? xr / xl : dr / dl;
  for (std::size_t j = 0; j < mid; ++j) X[j] *= ratio, dX[j] *= ratio;
  X[mid] = xr, dX[mid] = dr;

  std::size_t jmax = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(X[j]) > std::abs(X[jmax])) jmax = j;
  const cplx norm = X[jmax];
  for (std::size_t j = 0; j < n; ++j) X[j] /= norm, dX[j] /= norm;

  out.X = ComplexProfile(g, std::move(X));
  out.dX = ComplexProfile(g, std::move(dX));
  out.integral = trapezoid(g.h(), out.X.values);
  CVec absx(n);
  for (std::size_t j = 0; j < n; ++j) absx[j] = std::abs(out.X[j]);
  out.abs_integral = trapezoid(g.h(), absx).real();
  out.envelope_ratio = envelope_ratio(out.X, std::abs(gamma));
  if (check) {
    if (!(out.defect <= opt.defect_tol))
      throw SpectralFailure("matching defect " + std::to_string(out.defect) + " exceeds tolerance");
    if (std::abs(out.integral) < opt.zero_average_tol * out.abs_integral)
      throw SpectralFailure("X has vanishing average");
  }
  return out;
}

CVec integrate_X_from_origin(cplx gamma, cplx coef, cplx x0, cplx dx0, const RVec& points) {
  const XOde ode{gamma, coef};
  CVec out;
  out.reserve(points.size());
  for (double z : points) {
    State s{x0.real(), x0.imag(), dx0.real(), dx0.imag()};
    if (z != 0.0) {
      auto st = odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_fehlberg78<State>());
      odeint::integrate_adaptive(st, ode, s, 0.0, z, z > 0 ? 1e-3 : -1e-3);
    }
    check_finite(s);
    out.emplace_back(s[0], s[1]);
  }
  return out;
}

CVec continuation_oracle(const Eigenpair& eig, cplx gamma, const RVec& points) {
  for (double z : points)
    if (std::abs(z) > 2.0) throw ConfigError("continuation oracle is restricted to |z| <= 2");
  const auto& g = eig.f.grid;
  const std::size_t c = g.mark_index();
  const cplx f0 = eig.f[c];
  const cplx df0 = (eig.f[c + 1] - eig.f[c - 1]) / (2.0 * g.h());
  // X(z) = f(λz) with λ = α^{-1/6} e^{-iπ/6}
  const cplx lambda = std::pow(eig.alpha, -1.0 / 6.0) * std::polar(1.0, -std::numbers::pi / 6.0);
  return integrate_X_from_origin(gamma, hyperbolic_coefficient(gamma), f0, lambda * df0, points);
}

// ---- W --------------------------------------------------------------------

WProfile build_W(const XProfile& x) {
  if (std::abs(x.integral) == 0.0) throw SpectralFailure("X has vanishing average");
  const Grid1D& g = x.X.grid;
  const std::size_t n = g.size();
  WProfile w;
  w.gamma = x.gamma, w.coef = x.coef;
  // W from the left end and W - 1 from the right end, so both tails keep full relative accuracy.
  // Segments use the endpoint-corrected trapezoid rule (X' is known), fourth order and consistent with
  // W' = X/I; the corrections telescope, so the total is the trapezoid value of I up to the tails.
  const std::size_t mid = g.mark_index();
  const double h = g.h();
  auto segment = [&](std::size_t j) { // ∫ over [z_j, z_{j+1}]
    return 0.5 * h * (x.X[j] + x.X[j + 1]) + h * h / 12.0 * (x.dX[j] - x.dX[j + 1]);
  };
  w.W = ComplexProfile(g), w.Wm1 = ComplexProfile(g);
  cplx acc{};
  for (std::size_t j = 1; j <= mid; ++j) {
    acc += segment(j - 1);
    w.W[j] = acc / x.integral;
  }
  acc = {};
  w.W[n - 1] = 1.0;
  for (std::size_t j = n - 1; j-- > mid;) {
    acc += segment(j);
    w.Wm1[j] = -acc / x.integral;
    if (j > mid) w.W[j] = 1.0 + w.Wm1[j];
  }
  for (std::size_t j = 0; j < mid; ++j) w.Wm1[j] = w.W[j] - 1.0;
  w.Wp = ComplexProfile(g), w.Wpp = ComplexProfile(g);
  for (std::size_t j = 0; j < n; ++j) {
    w.Wp[j] = x.X[j] / x.integral;
    w.Wpp[j] = x.dX[j] / x.integral;
  }
  w.left_value = std::abs(w.W[0]);
  w.right_defect = std::abs(w.W[n - 1] - 1.0);

  // The stencil is applied to (γ-z²)(W - S) with S a smooth erf step whose contribution is added
  // analytically; W - S is formed from the accurate tail on each side to keep the roundoff floor low.
  const double rpi = 1.0 / std::sqrt(std::numbers::pi);
  CVec pw(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = g.node(j);
    const cplx d = j < mid ? w.W[j] - 0.5 * std::erfc(-z) : w.Wm1[j] + 0.5 * std::erfc(z);
    pw[j] = (x.gamma - z * z) * d;
  }
  const CVec d3 = third_derivative_interior(g, pw);
  double res = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const double z = g.node(j);
    const cplx p = x.gamma - z * z;
    const double e = std::exp(-z * z) * rpi;
    const double s1 = e, s2 = -2.0 * z * e, s3 = (4.0 * z * z - 2.0) * e;
    const cplx d3s = p * s3 - 6.0 * z * s2 - 6.0 * s1;
    res = std::max(res, std::abs(x.coef * p * p * w.Wp[j] + d3[j] + d3s));
  }
  w.residual = res;
  return w;
}

// ---- constants ------------------------------------------------------------

SpectralConstants spectral_constants_hyperbolic(double alpha, double curvature) {
  if (!(alpha > 0)) throw SpectralFailure("eigenvalue must be positive");
  if (curvature == 0.0 || !std::isfinite(curvature)) throw SpectralFailure("degenerate curvature U_s''(a) = 0");
  SpectralConstants sc;
  sc.model = Model::Hyperbolic;
  sc.alpha = alpha;
  sc.gamma = std::cbrt(alpha) * std::polar(1.0, -2.0 * std::numbers::pi / 3.0);
  sc.scale = std::cbrt(std::abs(curvature) / 2.0);
  sc.tau = sc.scale * sc.gamma;
  sc.sigma0 = -sc.tau.imag();
  sc.curvature_sign = curvature > 0 ? 1 : -1;
  return sc;
}

SpectralConstants spectral_constants_hyperbolic(const Eigenpair& eig, const ShearFlow& shear) {
  shear.require_hyperbolic_admissible();
  return spectral_constants_hyperbolic(eig.alpha, shear.curvature());
}

// ---- layer functions ------------------------------------------------------

LayerFunctions::LayerFunctions(const WProfile& w, bool mirrored)
    : w_(w.W.grid, w.W.values, w.Wp.values, 0.0, 1.0), wm1_(w.Wm1.grid, w.Wm1.values, w.Wp.values, -1.0, 0.0),
      wp_(w.Wp.grid, w.Wp.values, w.Wpp.values, 0.0, 0.0), mirrored_(mirrored) {}

cplx LayerFunctions::W(double z) const { return z < 0.0 ? W_minus_H(z) : 1.0 + W_minus_H(z); }

cplx LayerFunctions::W_minus_H(double z) const {
  const cplx v = z < 0.0 ? w_(z) : wm1_(z);
  return mirrored_ ? std::conj(v) : v;
}

cplx LayerFunctions::Wp(double z) const {
  const cplx v = wp_(z);
  return mirrored_ ? std::conj(v) : v;
}

} // namespace blayer
