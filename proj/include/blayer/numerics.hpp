#pragma once
/// Weighted sup-norms, finite differences, quadrature and small dense/banded helpers.

#include "blayer/grid.hpp"

#include <functional>
#include <span>

namespace blayer {

/// ‖f‖_{W^{s,∞}_α} = sup e^{αy}|f| (+ sup e^{αy}|f'| when s = 1).
struct WeightedNormParams {
  double alpha = 1.0;
  int s = 0;
};

/// Weighted sup-norm over all nodes. Derivative (s = 1) uses `differentiate(profile, 1)`.
double wnorm(const ComplexProfile& f, const WeightedNormParams& p);

/// Weighted sup-norm restricted to nodes with y in [ylo, yhi].
double wnorm(const ComplexProfile& f, const WeightedNormParams& p, double ylo, double yhi);

/// Weighted sup of raw samples on the grid, skipping the listed node indices.
double wsup(const Grid1D& g, std::span<const cplx> v, double alpha,
            std::span<const std::size_t> skip = {});

/// Second-order differences: centered inside, one-sided at both ends.
ComplexProfile differentiate(const ComplexProfile& f, int order);

/// Centered fourth-difference third derivative on interior nodes j = 2..n-3; zero elsewhere.
CVec third_derivative_interior(const Grid1D& g, std::span<const cplx> f);

/// Trapezoidal running integral, 0 at the first node.
ComplexProfile cumulative_integral(const ComplexProfile& f);
void cumulative_integral(double h, std::span<const cplx> f, std::span<cplx> out);

/// Trapezoidal integral over the whole grid.
cplx trapezoid(double h, std::span<const cplx> f);

/// H(y - a) with H(0) = 1.
ComplexProfile heaviside_profile(const Grid1D& g, double a);

/// Thomas algorithm for a complex tridiagonal system, pre-factored so it can be reused.
class Tridiagonal {
public:
  /// lower[j] couples x[j-1] into row j (lower[0] unused); upper[j] couples x[j+1] (upper[n-1] unused).
  Tridiagonal(CVec lower, CVec diag, CVec upper);
  void solve(std::span<cplx> rhs) const; ///< In-place.
  std::size_t size() const noexcept { return diag_.size(); }

private:
  CVec lower_, diag_, upper_; // diag_ and upper_ hold the eliminated coefficients
};

/// Piecewise cubic Hermite interpolant of f from samples of f and f'.
/// Outside the grid it returns the constant extensions `left`/`right`.
class HermiteInterpolant {
public:
  HermiteInterpolant() = default;
  HermiteInterpolant(Grid1D g, CVec f, CVec df, cplx left, cplx right);
  cplx operator()(double z) const;
  const Grid1D& grid() const noexcept { return g_; }

private:
  Grid1D g_;
  CVec f_, df_;
  cplx left_{}, right_{};
};

/// Ordinary least squares y = slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0; ///< max |y_i - fit_i|
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Runs f(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
/// Results are written by index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, unsigned threads = 0);

} // namespace blayer
