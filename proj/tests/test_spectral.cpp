#include "fixtures.hpp"

#include "blayer/error.hpp"

#include <doctest.h>

using namespace blayer;
using blayer::test::exact_f;

TEST_SUITE("spectral") {

TEST_CASE("eigenvalue, parity and eigenfunction") {
  const Eigenpair& e = test::hyperbolic().eig;
  CHECK(std::abs(e.alpha - 1.0) <= 1e-6);
  CHECK(e.residual <= 1e-7);
  CHECK(e.parity == 1);
  CHECK(e.parity_defect <= 1e-10);
  const Grid1D& g = e.f.grid;
  const double f0 = e.f[g.mark_index()].real();
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(e.f[j].real() / f0 - exact_f(g.node(j))));
  CHECK(err <= 1e-4);
  // every reported candidate below the chosen one fails the decay test
  for (const auto& c : e.candidates)
    if (c.alpha < e.alpha - 1e-6) CHECK_FALSE(c.decays);
}

TEST_CASE("empty window is a spectral failure") {
  EigenOptions o;
  o.n = 1000;
  o.window_lo = 2.0;
  o.window_hi = 3.0;
  CHECK_THROWS_AS(solve_eigenproblem(o), SpectralFailure);
}

TEST_CASE("constants from the eigenvalue") {
  const SpectralConstants sc = spectral_constants_hyperbolic(1.0, -2.0);
  CHECK(std::abs(sc.gamma - std::polar(1.0, -2.0 * std::numbers::pi / 3.0)) <= 1e-14);
  CHECK(sc.tau.imag() < 0);
  CHECK(sc.sigma0 > 0);
  const SpectralConstants s4 = spectral_constants_hyperbolic(1.0, -4.0);
  CHECK(s4.scale == doctest::Approx(std::cbrt(2.0) * sc.scale).epsilon(1e-14));
  CHECK(s4.sigma0 == doctest::Approx(std::cbrt(2.0) * sc.sigma0).epsilon(1e-12));
  CHECK(spectral_constants_hyperbolic(1.0, 2.0).mirrored());
  CHECK_THROWS_AS(spectral_constants_hyperbolic(1.0, 0.0), SpectralFailure);
}

TEST_CASE("X matches the rotated eigenfunction") {
  const XProfile& x = test::hyperbolic().x;
  CHECK(x.defect <= 1e-6);
  const Grid1D& g = x.X.grid;
  const cplx b = std::polar(1.0, -std::numbers::pi / 6.0);
  const cplx x0 = x.X[g.mark_index()];
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double z = g.node(j);
    if (std::abs(z) > 2.0) continue;
    err = std::max(err, std::abs(x.X[j] / x0 - exact_f(b * z)));
  }
  CHECK(err <= 1e-6);
  CHECK(std::abs(x.integral) >= 1e-8);
}

TEST_CASE("matching defect separates the true γ") {
  const cplx gamma = test::hyperbolic().sc.gamma;
  XOptions o;
  o.intervals = 12000;
  CHECK(shoot_match(gamma, hyperbolic_coefficient(gamma), o).defect <= 1e-6);
  const cplx bad = gamma * 1.05;
  CHECK(shoot_match(bad, hyperbolic_coefficient(bad), o).defect >= 1e-2);
  CHECK_THROWS_AS(solve_X(bad, hyperbolic_coefficient(bad), o), SpectralFailure);
}

TEST_CASE("continuation oracle") {
  const auto& h = test::hyperbolic();
  RVec pts;
  for (int i = -20; i <= 20; ++i) pts.push_back(0.1 * i);
  const CVec cont = continuation_oracle(h.eig, h.sc.gamma, pts);
  const Grid1D& g = h.x.X.grid;
  const cplx x0 = h.x.X[g.mark_index()];
  double err = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t j = g.nearest(pts[i]);
    REQUIRE(std::abs(g.node(j) - pts[i]) <= 1e-12);
    err = std::max(err, std::abs(h.x.X[j] / x0 - cont[i] / cont[20]));
  }
  CHECK(err <= 1e-4);
  CHECK_THROWS_AS(continuation_oracle(h.eig, h.sc.gamma, {2.5}), ConfigError);
}

TEST_CASE("W boundary values and normalization") {
  const WProfile& w = test::hyperbolic().w;
  CHECK(w.left_value <= 1e-8);
  CHECK(w.right_defect <= 1e-8);
  const cplx total = trapezoid(w.Wp.grid.h(), w.Wp.values);
  CHECK(std::abs(total - 1.0) <= 1e-6);
  const LayerFunctions& lf = test::layer();
  CHECK(std::abs(lf.W(-1e3)) == 0.0);
  CHECK(lf.W(1e3) == cplx(1.0));
  CHECK(std::abs(lf.W_minus_H(0.5) - (lf.W(0.5) - 1.0)) <= 1e-10);
}

TEST_CASE("W of the mirrored layer is the conjugate") {
  const auto& h = test::hyperbolic();
  const LayerFunctions plain(h.w, false), mir(h.w, true);
  for (double z : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    CHECK(std::abs(mir.W(z) - std::conj(plain.W(z))) <= 1e-14);
    CHECK(std::abs(mir.Wp(z) - std::conj(plain.Wp(z))) <= 1e-14);
  }
}

}
