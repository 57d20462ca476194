#pragma once
/// Classical Prandtl counterpart: matching root γ_P, profiles, parabolic evolution and the
/// quadratic-shear exact solution.

#include "blayer/evolution.hpp"
#include "blayer/profiles.hpp"
#include "blayer/spectral.hpp"

namespace blayer {

struct PrandtlOptions {
  XOptions x;
  double secant_tol = 1e-13; ///< on |Δγ|
  int max_iterations = 60;
  double perturbation = 0.05; ///< relative offset of the second secant seed and of the defect probe
};

struct PrandtlSpectral {
  SpectralConstants sc; ///< model = Prandtl, scale = (|U''(a)|/2)^{1/4}
  XProfile x;
  WProfile w;
  cplx seed{};
  int iterations = 0;
  double defect = 0.0;
  double defect_perturbed = 0.0; ///< defect at (1 + perturbation)·γ_P
};

/// Starting guess: the hyperbolic γ rotated by half the phase between the two third-derivative
/// coefficients (i versus 1/γ).
cplx prandtl_seed(cplx gamma_hyperbolic);

/// Secant iteration in ℂ on the analytic matching mismatch of (z²-γ)X'' + 6zX' + 6X = -i(z²-γ)²X.
PrandtlSpectral spectral_constants_prandtl(const ShearFlow& shear, cplx gamma_hyperbolic,
                                           const PrandtlOptions& opt = {});

/// Closed-form Prandtl profiles at frequency k on y (a on-grid).
ProfileSetK build_profile_set_prandtl(double k, const LayerFunctions& lf, const SpectralConstants& sc,
                                      const ShearFlow& shear, const Grid1D& y, double alpha);

/// dt of the IMEX scheme: min(cfl/(k c_U), 0.5 h) with c_U = ‖U_s - U_s(a)‖ + ‖U_s'‖ L.
double prandtl_dt(double k, const ShearFlow& shear, const Grid1D& g, double cfl);

/// ∂_t u + ikU_s u + kvU_s' - ∂_y²u = f, v = -i∫u, u = 0 at both ends. Diffusion implicit,
/// transport explicit (third-order IMEX Runge-Kutta, one tridiagonal factorization per run).
Trajectory evolve_prandtl(double k, const ShearFlow& shear, const Grid1D& g, const CVec& u0, const Forcing& f,
                          double T, const EvolveConfig& cfg, const StepObserver& obs = {});

struct QuadraticOracle {
  double k = 0.0;
  double R_norm = 0.0;         ///< ‖ℛ_k‖ (exactly zero in exact arithmetic)
  double slope_ratio = 0.0;    ///< fitted log-norm slope / (σ₀_P √k)
  double max_rel_deviation = 0.0; ///< vs e^{λt}𝕌_k on y <= 0.9 L
  double horizon = 0.0;
  Trajectory traj;
};

/// Homogeneous run from 𝕌_k for the quadratic shear over one e-folding, α = 0, L = a + 8.
QuadraticOracle quadratic_oracle(double k, const PrandtlSpectral& ps, const ShearFlow& shear, const YGridOptions& yo,
                                 const EvolveConfig& cfg);

} // namespace blayer
