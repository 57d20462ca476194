#include "blayer/numerics.hpp"
#include "blayer/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace blayer {

// ---- Grid1D ---------------------------------------------------------------

Grid1D Grid1D::uniform(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw ResolutionError("uniform grid needs n >= 2 and hi > lo");
  Grid1D g;
  g.lo_ = lo;
  g.n_ = n;
  g.h_ = (hi - lo) / static_cast<double>(n - 1);
  return g;
}

Grid1D Grid1D::with_node_at(double lo, double hi, double mark, double h_max) {
  if (!(mark >= lo && mark <= hi)) throw ResolutionError("marked point outside [lo, hi]");
  if (!(h_max > 0.0)) throw ResolutionError("grid spacing must be positive");
  Grid1D g;
  g.lo_ = lo;
  if (mark > lo) {
    auto m = static_cast<std::size_t>(std::ceil((mark - lo) / h_max - 1e-9));
    m = std::max<std::size_t>(m, 1);
    g.h_ = (mark - lo) / static_cast<double>(m);
    g.mark_ = m;
  } else {
    g.h_ = h_max;
    g.mark_ = 0;
  }
  g.n_ = static_cast<std::size_t>(std::ceil((hi - lo) / g.h_ - 1e-9)) + 1;
  return g;
}

Grid1D Grid1D::symmetric(double half, std::size_t intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw ResolutionError("symmetric grid needs an even interval count");
  Grid1D g = uniform(-half, half, intervals + 1);
  g.mark_ = intervals / 2;
  return g;
}

Grid1D Grid1D::from_parts(double lo, double h, std::size_t n, std::optional<std::size_t> mark) {
  if (n < 2 || !(h > 0.0)) throw ResolutionError("grid needs n >= 2 and h > 0");
  if (mark && *mark >= n) throw ResolutionError("marked node outside the grid");
  Grid1D g;
  g.lo_ = lo, g.h_ = h, g.n_ = n, g.mark_ = mark;
  return g;
}

RVec Grid1D::nodes() const {
  RVec y(n_);
  for (std::size_t j = 0; j < n_; ++j) y[j] = node(j);
  return y;
}

std::size_t Grid1D::mark_index() const {
  if (!mark_) throw ResolutionError("grid has no marked node");
  return *mark_;
}

std::size_t Grid1D::nearest(double y) const noexcept {
  double r = std::round((y - lo_) / h_);
  if (r < 0.0) return 0;
  if (r > static_cast<double>(n_ - 1)) return n_ - 1;
  return static_cast<std::size_t>(r);
}

// ---- ComplexProfile -------------------------------------------------------

ComplexProfile::ComplexProfile(const Grid1D& g, CVec v) : grid(g), values(std::move(v)) { validate(); }

bool ComplexProfile::finite() const noexcept {
  return std::all_of(values.begin(), values.end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

void ComplexProfile::validate() const {
  if (values.size() != grid.size()) throw InvalidProfile("length does not match grid");
  if (!finite()) throw InvalidProfile("non-finite sample");
}

// ---- norms ----------------------------------------------------------------

double wsup(const Grid1D& g, std::span<const cplx> v, double alpha, std::span<const std::size_t> skip) {
  double m = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!skip.empty() && std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
    m = std::max(m, std::exp(alpha * g.node(j)) * std::abs(v[j]));
  }
  return m;
}

namespace {
double wnorm_range(const ComplexProfile& f, const WeightedNormParams& p, std::size_t j0, std::size_t j1) {
  f.validate();
  if (p.alpha < 0.0) throw ConfigError("weight rate must be non-negative");
  double m0 = 0.0;
  for (std::size_t j = j0; j < j1; ++j) m0 = std::max(m0, std::exp(p.alpha * f.grid.node(j)) * std::abs(f[j]));
  if (p.s == 0) return m0;
  if (f.size() < 3) throw ResolutionError("derivative norm needs >= 3 nodes");
  // centered differences inside, second-order one-sided at the ends
  const double h = f.grid.h();
  const std::size_t n = f.size();
  auto d = [&](std::size_t j) -> cplx {
    if (j == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (j == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return (f[j + 1] - f[j - 1]) / (2.0 * h);
  };
  double m1 = 0.0;
  for (std::size_t j = j0; j < j1; ++j) m1 = std::max(m1, std::exp(p.alpha * f.grid.node(j)) * std::abs(d(j)));
  return m0 + m1;
}
} // namespace

double wnorm(const ComplexProfile& f, const WeightedNormParams& p) { return wnorm_range(f, p, 0, f.size()); }

double wnorm(const ComplexProfile& f, const WeightedNormParams& p, double ylo, double yhi) {
  const auto& g = f.grid;
  std::size_t j0 = 0, j1 = 0;
  while (j0 < g.size() && g.node(j0) < ylo - 1e-12 * g.h()) ++j0;
  j1 = j0;
  while (j1 < g.size() && g.node(j1) <= yhi + 1e-12 * g.h()) ++j1;
  return wnorm_range(f, p, j0, j1);
}

// ---- differences and quadrature ------------------------------------------

ComplexProfile differentiate(const ComplexProfile& f, int order) {
  f.validate();
  const std::size_t n = f.size();
  if (n < 5) throw ResolutionError("differentiate needs >= 5 nodes");
  const double h = f.grid.h();
  ComplexProfile d(f.grid);
  if (order == 1) {
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  } else if (order == 2) {
    const double h2 = h * h;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  } else {
    throw ConfigError("differentiate supports order 1 or 2");
  }
  return d;
}

CVec third_derivative_interior(const Grid1D& g, std::span<const cplx> f) {
  const std::size_t n = f.size();
  CVec d(n, cplx{});
  const double c = 1.0 / (2.0 * g.h() * g.h() * g.h());
  for (std::size_t j = 2; j + 2 < n; ++j) d[j] = c * (f[j + 2] - 2.0 * f[j + 1] + 2.0 * f[j - 1] - f[j - 2]);
  return d;
}

void cumulative_integral(double h, std::span<const cplx> f, std::span<cplx> out) {
  if (f.empty()) return;
  cplx acc{};
  out[0] = acc;
  for (std::size_t j = 1; j < f.size(); ++j) {
    acc += 0.5 * h * (f[j] + f[j - 1]);
    out[j] = acc;
  }
}

ComplexProfile cumulative_integral(const ComplexProfile& f) {
  f.validate();
  ComplexProfile out(f.grid);
  cumulative_integral(f.grid.h(), f.values, out.values);
  return out;
}

cplx trapezoid(double h, std::span<const cplx> f) {
  if (f.size() < 2) return {};
  cplx s = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
  return s * h;
}

ComplexProfile heaviside_profile(const Grid1D& g, double a) {
  if (a < g.lo() - 1e-12 * g.h() || a > g.hi() + 1e-12 * g.h()) throw ResolutionError("step location outside grid");
  ComplexProfile H(g);
  for (std::size_t j = 0; j < g.size(); ++j) H[j] = (g.node(j) >= a - 1e-9 * g.h()) ? 1.0 : 0.0;
  return H;
}

// ---- Tridiagonal ----------------------------------------------------------

Tridiagonal::Tridiagonal(CVec lower, CVec diag, CVec upper)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
  const std::size_t n = diag_.size();
  if (lower_.size() != n || upper_.size() != n || n == 0) throw ConfigError("tridiagonal size mismatch");
  // forward elimination stored in place: diag_ -> pivots, lower_ -> multipliers
  for (std::size_t j = 1; j < n; ++j) {
    if (diag_[j - 1] == cplx{}) throw NonConvergence("zero pivot in tridiagonal solve");
    lower_[j] /= diag_[j - 1];
    diag_[j] -= lower_[j] * upper_[j - 1];
  }
  if (diag_[n - 1] == cplx{}) throw NonConvergence("zero pivot in tridiagonal solve");
}

void Tridiagonal::solve(std::span<cplx> x) const {
  const std::size_t n = diag_.size();
  for (std::size_t j = 1; j < n; ++j) x[j] -= lower_[j] * x[j - 1];
  x[n - 1] /= diag_[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) x[j] = (x[j] - upper_[j] * x[j + 1]) / diag_[j];
}

// ---- Hermite interpolation ------------------------------------------------

HermiteInterpolant::HermiteInterpolant(Grid1D g, CVec f, CVec df, cplx left, cplx right)
    : g_(g), f_(std::move(f)), df_(std::move(df)), left_(left), right_(right) {
  if (f_.size() != g_.size() || df_.size() != g_.size()) throw InvalidProfile("interpolant sample count");
}

cplx HermiteInterpolant::operator()(double z) const {
  if (z < g_.lo()) return left_;
  if (z > g_.hi()) return right_;
  const double h = g_.h();
  double s = (z - g_.lo()) / h;
  auto j = static_cast<std::size_t>(s);
  if (j >= g_.size() - 1) j = g_.size() - 2;
  const double t = s - static_cast<double>(j);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * f_[j] + h10 * h * df_[j] + h01 * f_[j + 1] + h11 * h * df_[j + 1];
}

// ---- fits -----------------------------------------------------------------

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("line fit needs >= 2 matching points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.slope * x[i] + f.intercept)));
  return f;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  RVec lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
  return fit_line(lx, ly);
}

// ---- parallel map ---------------------------------------------------------

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lk(m);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace blayer
