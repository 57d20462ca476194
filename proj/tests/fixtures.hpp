#pragma once
/// Shared spectral fixtures: computed once per test process.

#include "blayer/acceptance.hpp"

#include <cmath>
#include <numbers>

namespace blayer::test {

inline const HyperbolicSpectral& hyperbolic() {
  static const HyperbolicSpectral h = [] {
    RunConfig c;
    return compute_hyperbolic_spectral(c, c.make_shear());
  }();
  return h;
}

inline const LayerFunctions& layer() {
  static const LayerFunctions lf(hyperbolic().w, hyperbolic().sc.mirrored());
  return lf;
}

inline const PrandtlSpectral& prandtl_gaussian() {
  static const PrandtlSpectral p = spectral_constants_prandtl(ShearFlow::gaussian_bump(), hyperbolic().sc.gamma);
  return p;
}

inline const PrandtlSpectral& prandtl_quadratic() {
  static const PrandtlSpectral p = spectral_constants_prandtl(ShearFlow::quadratic(), hyperbolic().sc.gamma);
  return p;
}

/// The exact eigenfunction of the auxiliary problem (eigenvalue 1).
inline double exact_f(double x) { return std::exp(-x * x / 2.0) / std::pow(1.0 + x * x, 2); }

/// Its continuation, evaluated at b·z.
inline cplx exact_f(cplx x) { return std::exp(-x * x / 2.0) / std::pow(1.0 + x * x, 2); }

inline double max_abs_diff(const CVec& a, const CVec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace blayer::test
