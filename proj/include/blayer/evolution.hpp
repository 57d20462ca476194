#pragma once
/// Time evolution of the frequency-k systems, the forced exact solution, the Duhamel identity and
/// the norm-inflation experiments.

#include "blayer/grid.hpp"
#include "blayer/profiles.hpp"
#include "blayer/shear.hpp"
#include "blayer/spectral.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace blayer {

/// (u, ∂_t u) at time t; ∂_t u is unused by the parabolic model.
struct StateVector {
  CVec u, w;
  double t = 0.0;
};

struct EvolveConfig {
  double cfl = 0.5;            ///< hyperbolic: dt = cfl·min(h, 1/(k c_U))
  double cfl_parabolic = 0.25; ///< Prandtl: dt = min(cfl_parabolic/(k c_U), 0.5 h)
  double fixed_dt = 0.0;       ///< > 0 overrides the rule (rounded so the horizon is hit exactly)
  std::size_t samples = 400;   ///< sampled norms per run (plus t = 0)
  double alpha = 1.0;          ///< weight rate of the sampled norms
  double norm_ymax = INFINITY; ///< norms only over y <= norm_ymax
  bool keep_snapshots = false;
};

struct Trajectory {
  double k = 0.0;
  Grid1D grid;
  double dt = 0.0;
  std::size_t steps = 0;
  RVec times, norms;
  std::vector<CVec> snapshots; ///< u at the sample times when requested
  StateVector final_state;
};

/// Writes f(t, ·) into the span.
using Forcing = std::function<void(double, std::span<cplx>)>;
/// Called after every step (and at t = 0) with the current u.
using StepObserver = std::function<void(double, std::span<const cplx>)>;

/// ikU_s u + kU_s' v with v = -i∫₀^y u.
ComplexProfile apply_B(double k, const ShearFlow& shear, const ComplexProfile& u);

/// dt of the explicit hyperbolic scheme.
double hyperbolic_dt(double k, const ShearFlow& shear, const Grid1D& g, double cfl);

/// ∂_t u = w, ∂_t w = -w - B(w) - B(u) + ∂_y²u + f, classical RK4, u = 0 at both ends.
Trajectory evolve(double k, const ShearFlow& shear, const Grid1D& g, const StateVector& init, const Forcing& f,
                  double T, const EvolveConfig& cfg, const StepObserver& obs = {});

/// f(t) = -scale e^{λt} ℛ_k of the profile set.
Forcing profile_forcing(const ProfileSetK& P);

/// Weighted sup of the exact-solution residual, normalized by the scaled ℛ norm, on nodes whose
/// stencil avoids the projected wall value. With `skip_critical`
/// the three nodes whose stencil touches a are excluded (the third derivative of 𝕌_k jumps there).
double substitution_residual(const ProfileSetK& P, const SpectralConstants& sc, const ShearFlow& shear,
                       bool skip_critical = true);

struct ForcedCheck {
  double max_rel_deviation = 0.0; ///< max_t ‖u(t) - e^{λt}𝕌‖ / ‖e^{λt}𝕌‖
  double max_norm_ratio_error = 0.0; ///< max_t |‖u(t)‖ / (e^{σ₀ k^p t}‖𝕌‖) - 1|
  double slope_ratio = 0.0;       ///< fitted d log‖u‖/dt divided by σ₀ k^p
  double slope_fit_residual = 0.0;
  Trajectory traj;
};

/// Forced run from the exact data compared with the closed-form solution.
ForcedCheck forced_check(const ProfileSetK& P, const SpectralConstants& sc, const ShearFlow& shear, double T,
                         const EvolveConfig& cfg);

struct DuhamelResult {
  double discrepancy = 0.0; ///< relative weighted-norm discrepancy at the horizon
  double lhs_norm = 0.0;
  std::size_t M = 0;
  double dt = 0.0;
};

/// Forced run versus homogeneous run plus Simpson-weighted impulse runs (M even).
DuhamelResult duhamel_check(const ProfileSetK& P, const ShearFlow& shear, double horizon, std::size_t M,
                            const EvolveConfig& cfg, bool zero_forcing = false);

enum class InflationData { Profile, Growing };
std::string to_string(InflationData d);
InflationData inflation_data_from_string(const std::string& s);

struct InflationRecord {
  double k = 0.0, sigma = 0.0, T = 0.0;
  double S = 0.0, t_argmax = 0.0, C_ref = 0.0;
  double data_norm = 0.0;
  double window_identity_error = 0.0; ///< |e^{-(σ₀-σ)k^p T} - k^{-p}|
  double norm_U = 0.0, norm_R_scaled = 0.0;
};

struct InflationReport {
  Model model = Model::Hyperbolic;
  InflationData data = InflationData::Profile;
  double sigma0 = 0.0, sigma = 0.0;
  double C_sigma = 0.0;
  std::vector<InflationRecord> records;
  double exponent = 0.0;
  bool strictly_increasing = false;
};

/// Window T_k = ln k / (q(σ₀-σ)k^p) with (p, q) = (1/3, 3) or (1/2, 2).
double inflation_window(Model m, double k, double sigma0, double sigma);

struct InflationOptions {
  double sigma_fraction = 0.5;
  InflationData data = InflationData::Profile;
  YGridOptions ygrid;
  EvolveConfig evolve;
};

InflationReport inflation_experiment(const std::vector<double>& ks, const LayerFunctions& lf,
                                     const SpectralConstants& sc, const ShearFlow& shear,
                                     const InflationOptions& opt);

/// Unit-size data for the homogeneous run: (u, w) and the norm it was divided by.
struct InflationInitial {
  StateVector state;
  double norm = 0.0;
};
InflationInitial inflation_initial(const ProfileSetK& P, const SpectralConstants& sc, InflationData d);

/// Runs the homogeneous flow for either model.
Trajectory evolve_homogeneous(const SpectralConstants& sc, double k, const ShearFlow& shear, const Grid1D& g,
                              const StateVector& init, double T, const EvolveConfig& cfg,
                              const StepObserver& obs = {});

struct SobolevDemoReport {
  bool feasible = false;
  double m = 0.0, mu = 0.0, delta = 0.0;
  double k = 0.0, T = 0.0;
  double data_norm = 0.0;   ///< ‖u(0)‖_{H^m W^{1,∞}_α} (unit by construction)
  double sup_norm = 0.0;    ///< sup_{t<=δ} ‖u(t)‖_{H^{m-μ} W^{0,∞}_α}
  double ratio = 0.0;       ///< sup_norm · δ
  double mode_identity_error = 0.0;
};

/// ‖(1+k²)^{-m/2} e^{ikx} g‖_{H^s W^{0,∞}_α} = (1+k²)^{(s-m)/2} ‖g‖.
double single_mode_norm(double k, double m, double s, double g_norm);

/// Picks the smallest k in the list with T_k <= δ whose run reaches sup·δ >= 1.
SobolevDemoReport sobolev_demo(double m, double mu, double delta, const std::vector<double>& ks,
                               const LayerFunctions& lf, const SpectralConstants& sc, const ShearFlow& shear,
                               const InflationOptions& opt);

} // namespace blayer
