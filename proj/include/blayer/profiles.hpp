#pragma once
/// Boundary-layer corrector V, and the frequency-k bundle (𝕌_k, 𝕍_k, ℛ_k, F1, F2).

#include "blayer/grid.hpp"
#include "blayer/shear.hpp"
#include "blayer/spectral.hpp"

#include <vector>

namespace blayer {

struct JumpReport {
  cplx V_minus{}, V_plus{}, dV_minus{}, dV_plus{}, d2V_minus{}, d2V_plus{};
  cplx jump_V{}, jump_dV{}, jump_d2V{};
  double err_V = 0.0;   ///< |[V] + τ| / |τ|
  double err_dV = 0.0;  ///< |[V']| / (|τ| s)
  double err_d2V = 0.0; ///< |[V''] + U_s''(a)| / |U_s''(a)|
};

struct VProfile {
  ComplexProfile V; ///< on the unstretched variable z̃, origin on-grid
  JumpReport jumps;
};

/// V(z̃) = (U_s''(a)/2)(z̃² - γ/s²)(W(s z̃) - H(z̃)), s = (|U_s''(a)|/2)^{1/3}, with γ taken from W;
/// equals (τ + U_s''(a) z̃²/2)(W - H) when τ is consistent. Sampled on the W grid / s.
/// With `check`, throws SpectralFailure when a jump misses its target by more than `tol` (relative).
VProfile build_V(const WProfile& w, const SpectralConstants& sc, const ShearFlow& shear, bool check = true,
                 double tol = 1e-3);

/// y-grid resolution controls.
struct YGridOptions {
  double L = 0.0;              ///< 0 selects a + max(10/α, 6)
  double h_max = 0.002;
  double nodes_per_layer = 40; ///< nodes across the layer width
  double min_nodes_per_layer = 8;
};

/// Layer width: k^{-1/3}(2/|U''(a)|)^{1/3} (hyperbolic) or k^{-1/4}(2/|U''(a)|)^{1/4} (Prandtl).
double layer_width(const SpectralConstants& sc, double k);

/// Grid on [0, L] with a on-grid; throws ResolutionError if the layer is underresolved.
Grid1D make_ygrid(const SpectralConstants& sc, const ShearFlow& shear, double k, double alpha, const YGridOptions& o);

struct ProfileSetK {
  Model model = Model::Hyperbolic;
  double k = 0.0;
  double alpha = 1.0; ///< weight rate used for the norms
  ComplexProfile U, V, V_int, R, F1, F2;
  cplx lambda{};      ///< time exponent: u^fr = e^{λt} 𝕌_k
  double forcing_scale = 0.0; ///< f_k = -forcing_scale · e^{λt} ℛ_k  (k^{4/3} or k)
  double norm_U = 0.0;
  double norm_R_scaled = 0.0; ///< forcing_scale · ‖ℛ_k‖
  double V_discrepancy = 0.0; ///< weighted sup of 𝕍 (closed form) minus -i∫𝕌
  double limit_deviation = 0.0; ///< ‖𝕌_k - iU_s'H(·-a)‖
};

/// Closed-form hyperbolic profiles at frequency k on y (a must be the marked node).
ProfileSetK build_profile_set(double k, const LayerFunctions& lf, const SpectralConstants& sc, const ShearFlow& shear,
                              const Grid1D& y, double alpha);

struct BoundsRow {
  double k = 0.0;
  double norm_U = 0.0;
  double norm_R_scaled = 0.0;
  double limit_deviation = 0.0;
};

struct BoundsSummary {
  std::vector<BoundsRow> rows;
  double ratio_U = 0.0;          ///< max/min ‖𝕌_k‖
  double min_U = 0.0, max_U = 0.0;
  double limit_norm = 0.0;       ///< ‖iU_s'H(·-a)‖
  double top_octave_R_factor = 0.0; ///< max/min of the scaled ℛ norm over k in [k_max/2, k_max]
  double max_R_scaled = 0.0;
  double limit_rate = 0.0;       ///< fitted exponent of the limit deviation
};

/// Per-k norms over the list (each k gets its own resolved grid).
BoundsSummary bounds_sweep(const std::vector<double>& ks, const LayerFunctions& lf, const SpectralConstants& sc,
                           const ShearFlow& shear, double alpha, const YGridOptions& o);

} // namespace blayer
