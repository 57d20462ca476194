#include "fixtures.hpp"

#include "blayer/error.hpp"

#include <doctest.h>

using namespace blayer;
using blayer::test::exact_f;

namespace {

EvolveConfig small_cfg() {
  EvolveConfig c;
  c.samples = 20;
  return c;
}

CVec bump(const Grid1D& g, double c) {
  CVec v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = g.node(j);
    v[j] = y * (g.hi() - y) * std::exp(-(y - c) * (y - c));
  }
  return v;
}

} // namespace

TEST_SUITE("prandtl") {

TEST_CASE("matching root") {
  const PrandtlSpectral& p = test::prandtl_gaussian();
  CHECK(std::abs(p.sc.gamma - std::polar(1.0, -0.75 * std::numbers::pi)) <= 1e-6);
  CHECK(p.sc.model == Model::Prandtl);
  CHECK(p.sc.gamma.imag() < 0);
  CHECK(p.sc.tau.imag() < 0);
  CHECK(p.defect <= 1e-6);
  CHECK(p.defect_perturbed >= 1e-2);
  CHECK(p.sc.sigma0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  // the quadratic shear has half the curvature: scale 2^{-1/4}, σ₀ halves
  CHECK(test::prandtl_quadratic().sc.sigma0 == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("X_P is the eigenfunction on a rotated ray") {
  const XProfile& x = test::prandtl_gaussian().x;
  const Grid1D& g = x.X.grid;
  const cplx b = std::polar(1.0, -std::numbers::pi / 8.0);
  const cplx x0 = x.X[g.mark_index()];
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double z = g.node(j);
    if (std::abs(z) <= 2.0) err = std::max(err, std::abs(x.X[j] / x0 - exact_f(b * z)));
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("quadratic shear makes the profiles exact") {
  const PrandtlSpectral& p = test::prandtl_quadratic();
  const ShearFlow q = ShearFlow::quadratic();
  YGridOptions yo;
  yo.L = 10.0;
  const Grid1D y = make_ygrid(p.sc, q, 64, 0.0, yo);
  const ProfileSetK P = build_profile_set_prandtl(64, LayerFunctions(p.w, p.sc.mirrored()), p.sc, q, y, 0.0);
  CHECK(wnorm(P.R, {0.0, 0}) == 0.0);
  CHECK(wnorm(P.F1, {0.0, 0}) == 0.0);
  CHECK(wnorm(P.F2, {0.0, 0}) == 0.0);
  CHECK(P.U[0] == cplx(0.0));
}

TEST_CASE("parabolic flow: zero data and linearity") {
  const ShearFlow s = ShearFlow::gaussian_bump();
  const Grid1D g = Grid1D::with_node_at(0.0, 12.0, 2.0, 0.01);
  const double k = 32;
  const Trajectory z = evolve_prandtl(k, s, g, CVec(g.size()), {}, 0.3, small_cfg());
  for (double n : z.norms) CHECK(n == 0.0);
  const CVec u = bump(g, 2.0), v = bump(g, 3.5);
  const cplx a{-0.4, 1.1};
  CVec w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) w[j] = u[j] + a * v[j];
  const CVec Tu = evolve_prandtl(k, s, g, u, {}, 0.3, small_cfg()).final_state.u;
  const CVec Tv = evolve_prandtl(k, s, g, v, {}, 0.3, small_cfg()).final_state.u;
  const CVec Tw = evolve_prandtl(k, s, g, w, {}, 0.3, small_cfg()).final_state.u;
  double err = 0.0, size = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(Tw[j] - Tu[j] - a * Tv[j]));
    size = std::max(size, std::abs(Tw[j]));
  }
  CHECK(err <= 1e-12 * size);
}

TEST_CASE("quadratic oracle at k = 64") {
  const QuadraticOracle q = quadratic_oracle(64, test::prandtl_quadratic(), ShearFlow::quadratic(), {}, small_cfg());
  CHECK(q.R_norm == 0.0);
  CHECK(std::abs(q.slope_ratio - 1.0) <= 0.01);
  CHECK(q.max_rel_deviation <= 1e-2);
  CHECK_THROWS_AS(quadratic_oracle(64, test::prandtl_quadratic(), ShearFlow::gaussian_bump(), {}, small_cfg()),
                  ConfigError);
}

TEST_CASE("forced Prandtl run for the gaussian bump") {
  const PrandtlSpectral& p = test::prandtl_gaussian();
  const ShearFlow s = ShearFlow::gaussian_bump();
  const Grid1D y = make_ygrid(p.sc, s, 64, 1.0, {});
  const ProfileSetK P = build_profile_set_prandtl(64, LayerFunctions(p.w, p.sc.mirrored()), p.sc, s, y, 1.0);
  const ForcedCheck f = forced_check(P, p.sc, s, 0.5, small_cfg());
  CHECK(f.max_rel_deviation <= 1e-2);
  CHECK(std::abs(f.slope_ratio - 1.0) <= 0.05);
}

}
