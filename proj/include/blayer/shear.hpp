#pragma once
/// Steady shear flows U_s(y) with derivatives up to order four.

#include "blayer/grid.hpp"

#include <array>
#include <memory>
#include <string>

namespace blayer {

enum class ShearFamily { GaussianBump, Quadratic, UserTable };

std::string to_string(ShearFamily f);
ShearFamily shear_family_from_string(const std::string& s);

/// Tabulated U_s and its derivatives; evaluated by cubic Hermite interpolation of each column
/// using the next column as slope (the fourth derivative is interpolated linearly).
struct ShearTable {
  RVec y;
  std::array<RVec, 5> d; ///< d[j][i] = U_s^{(j)}(y[i])
  /// Loads a CSV with header and columns y,U,U1,U2,U3,U4 on a uniform y grid.
  static ShearTable load_csv(const std::string& path);
};

class ShearFlow {
public:
  /// U_s(y) = -κ (y-a)² exp(-β (y-a)²).
  static ShearFlow gaussian_bump(double a = 2.0, double kappa = 1.0, double beta = 1.0);
  /// U_s(y) = (y-a)²/2; does not decay, only meaningful for the Prandtl model.
  static ShearFlow quadratic(double a = 2.0);
  static ShearFlow table(ShearTable t, double a);

  ShearFamily family() const noexcept { return family_; }
  double a() const noexcept { return a_; }
  double kappa() const noexcept { return kappa_; }
  double beta() const noexcept { return beta_; }

  /// d-th derivative at y, d in 0..4.
  double eval(double y, int d = 0) const;
  double curvature() const { return eval(a_, 2); } ///< U_s''(a)

  /// Gaussian-type decay, so weighted norms with α > 0 are meaningful.
  bool decaying() const noexcept { return family_ != ShearFamily::Quadratic; }

  /// Hyperbolic admissibility: U_s(a) = U_s'(a) = 0, U_s''(a) != 0. Throws SpectralFailure otherwise.
  void require_hyperbolic_admissible() const;
  /// Prandtl admissibility: U_s'(a) = 0, U_s''(a) != 0.
  void require_prandtl_admissible() const;

  /// max_j |U_s^{(d)}| over the nodes of g.
  double sup_on(const Grid1D& g, int d, double shift = 0.0) const;

private:
  ShearFamily family_ = ShearFamily::GaussianBump;
  double a_ = 2.0, kappa_ = 1.0, beta_ = 1.0;
  std::shared_ptr<const ShearTable> table_;
};

} // namespace blayer
