#pragma once
/// Auxiliary eigenproblem, the profile X on the real line, the connecting profile W, and the
/// spectral constants γ, τ, σ₀.

#include "blayer/grid.hpp"
#include "blayer/numerics.hpp"
#include "blayer/shear.hpp"

#include <string>
#include <vector>

namespace blayer {

enum class Model { Hyperbolic, Prandtl };
std::string to_string(Model m);
Model model_from_string(const std::string& s);

// ---- eigenproblem ---------------------------------------------------------

struct EigenOptions {
  double xbar = 12.0;       ///< half-width of the symmetric domain
  std::size_t n = 4000;     ///< number of intervals (even, so x = 0 is a node)
  double window_lo = 0.0;   ///< eigenvalues searched in (window_lo, window_hi]
  double window_hi = 50.0;
  double residual_tol = 1e-7;
  bool extrapolate = true;  ///< Richardson-combine the n and 2n eigenvalues
};

struct EigenCandidate {
  double alpha = 0.0;
  double envelope_ratio = 0.0;
  bool decays = false;
};

struct Eigenpair {
  double alpha = 0.0;          ///< reported eigenvalue (extrapolated when enabled)
  double alpha_discrete = 0.0; ///< eigenvalue of the n-interval matrix
  double alpha_fine = 0.0;     ///< eigenvalue of the 2n-interval matrix (0 if not computed)
  ComplexProfile f;            ///< real eigenvector, sup|f| = 1
  double residual = 0.0;       ///< ‖A_h f - α_h f‖_∞ / ‖f‖_∞ on interior nodes
  double envelope_ratio = 0.0;
  int parity = 1;              ///< +1 even, -1 odd
  double parity_defect = 0.0;
  std::vector<EigenCandidate> candidates;
  EigenOptions options;
};

/// Af = f''/(x²+1) + 6x f'/(x²+1)² + 6f/(x²+1)² = αf with f(±X̄) = 0.
Eigenpair solve_eigenproblem(const EigenOptions& opt = {});

/// max_{|x| >= X̄/2} |f| e^{√ρ x²/4}, divided by the same quantity at |x| = X̄/2.
double envelope_ratio(const ComplexProfile& f, double rho);

// ---- X and W --------------------------------------------------------------

/// Right-hand-side coefficient of (z²-γ)X'' + 6zX' + 6X = c (z²-γ)² X.
/// The hyperbolic model has c = γ; the Prandtl model has c = -i.
inline cplx hyperbolic_coefficient(cplx gamma) { return gamma; }
inline cplx prandtl_coefficient() { return {0.0, -1.0}; }

struct XOptions {
  double z_half = 12.0;
  std::size_t intervals = 48000;
  double rtol = 1e-12;
  double atol = 1e-300;
  double defect_tol = 1e-6;
  double zero_average_tol = 1e-8;
};

/// Result of shooting from ±Z to 0 without sampling.
struct Matching {
  double defect = 0.0; ///< sine of the angle between the two branch states at 0
  cplx mismatch{};     ///< difference of logarithmic derivatives (analytic in γ)
  cplx x0_right{}, dx0_right{}, x0_left{}, dx0_left{};
};

Matching shoot_match(cplx gamma, cplx coef, const XOptions& opt = {});

struct XProfile {
  ComplexProfile X;
  ComplexProfile dX; ///< X' from the integrator
  cplx gamma{}, coef{};
  double defect = 0.0;
  cplx integral{};
  double abs_integral = 0.0; ///< ∫|X|
  double envelope_ratio = 0.0;
};

/// Two-sided shooting with WKB starts. With `check`, throws SpectralFailure when the defect or
/// the average fails its tolerance.
XProfile solve_X(cplx gamma, cplx coef, const XOptions& opt = {}, bool check = true);

/// Integrates the X equation outward from X(0), X'(0) along the real z axis to each sample point.
CVec integrate_X_from_origin(cplx gamma, cplx coef, cplx x0, cplx dx0, const RVec& points);

/// X(z) = f(α^{-1/6}e^{-iπ/6}z) obtained by continuing the real eigenfunction from the origin.
/// Only meant for |z| <= 2.
CVec continuation_oracle(const Eigenpair& eig, cplx gamma, const RVec& points);

struct WProfile {
  ComplexProfile W, Wp, Wpp; ///< W, W' = X/I, W'' = X'/I
  ComplexProfile Wm1;        ///< W - 1, accumulated from the right end (accurate for z >= 0)
  cplx gamma{}, coef{};
  double residual = 0.0;     ///< sup of c(γ-z²)²W' + d³[(γ-z²)W] on interior nodes
  double left_value = 0.0;   ///< |W(-Z)|
  double right_defect = 0.0; ///< |W(Z) - 1|
};

WProfile build_W(const XProfile& x);

// ---- spectral constants ---------------------------------------------------

struct SpectralConstants {
  Model model = Model::Hyperbolic;
  double alpha = 0.0;
  cplx gamma{};
  cplx tau{};
  double sigma0 = 0.0;
  double scale = 1.0;     ///< (|U_s''(a)|/2)^{1/3} (hyperbolic) or ^{1/4} (Prandtl)
  int curvature_sign = -1;

  /// For U_s''(a) > 0 the layer problem is the complex conjugate mirror: γ → -conj(γ), W → conj(W).
  bool mirrored() const noexcept { return curvature_sign > 0; }
  cplx gamma_eff() const noexcept { return mirrored() ? -std::conj(gamma) : gamma; }
  cplx tau_eff() const noexcept { return mirrored() ? -std::conj(tau) : tau; }
  /// Frequency exponent: k^{1/3} (hyperbolic) or k^{1/2} (Prandtl).
  double rate_power() const noexcept { return model == Model::Hyperbolic ? 1.0 / 3.0 : 0.5; }
};

SpectralConstants spectral_constants_hyperbolic(const Eigenpair& eig, const ShearFlow& shear);
SpectralConstants spectral_constants_hyperbolic(double alpha, double curvature);

/// W and W' on the real line by Hermite interpolation, extended by 0/1 and 0 outside the window.
class LayerFunctions {
public:
  LayerFunctions() = default;
  LayerFunctions(const WProfile& w, bool mirrored);
  cplx W(double z) const;
  cplx W_minus_H(double z) const; ///< W(z) - H(z), accurate on both tails
  cplx Wp(double z) const;
  double z_half() const noexcept { return w_.grid().hi(); }

private:
  HermiteInterpolant w_, wm1_, wp_;
  bool mirrored_ = false;
};

} // namespace blayer
