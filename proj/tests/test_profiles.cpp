#include "fixtures.hpp"

#include "blayer/error.hpp"

#include <doctest.h>

using namespace blayer;

namespace {

const ShearFlow& shear() {
  static const ShearFlow s = ShearFlow::gaussian_bump();
  return s;
}

ProfileSetK profiles_at(double k) {
  const auto& sc = test::hyperbolic().sc;
  return build_profile_set(k, test::layer(), sc, shear(), make_ygrid(sc, shear(), k, 1.0, {}), 1.0);
}

} // namespace

TEST_SUITE("profiles") {

TEST_CASE("jump conditions of the corrector") {
  const auto& h = test::hyperbolic();
  const VProfile v = build_V(h.w, h.sc, shear());
  CHECK(v.jumps.err_V <= 1e-3);
  CHECK(v.jumps.err_dV <= 1e-3);
  CHECK(v.jumps.err_d2V <= 1e-3);
  // a τ inconsistent with the layer profile shows up in [V]
  SpectralConstants bad = h.sc;
  bad.tau *= 1.1;
  CHECK_THROWS_AS(build_V(h.w, bad, shear()), SpectralFailure);
  CHECK(build_V(h.w, bad, shear(), false).jumps.err_V == doctest::Approx(1.0 / 11.0).epsilon(1e-4));
}

TEST_CASE("layer width and grid") {
  const auto& sc = test::hyperbolic().sc;
  CHECK(layer_width(sc, 1000.0) == doctest::Approx(0.1).epsilon(1e-12));
  const Grid1D y = make_ygrid(sc, shear(), 256, 1.0, {});
  CHECK(y.node(y.mark_index()) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(y.hi() >= 12.0 - 1e-9);
  YGridOptions coarse;
  coarse.h_max = 0.5;
  coarse.nodes_per_layer = 1;
  CHECK_THROWS_AS(make_ygrid(sc, shear(), 4096, 1.0, coarse), ResolutionError);
}

TEST_CASE("profile set structure at k = 256") {
  const ProfileSetK P = profiles_at(256);
  const Grid1D& y = P.U.grid;
  const std::size_t ia = y.mark_index();
  CHECK(P.U[0] == cplx(0.0));
  CHECK(P.U.finite());
  CHECK(P.R.finite());
  // continuity of 𝕌 across a: the jump is a two-node difference
  CHECK(std::abs(P.U[ia] - P.U[ia - 1]) <= 20 * y.h() * P.norm_U);
  // two routes to 𝕍
  CHECK(P.V_discrepancy <= 1e-4);
  // away from the layer, k^{4/3}ℛ is the outer term iU_s''' H(y - a)
  const double k43 = std::pow(256.0, 4.0 / 3.0);
  const std::size_t above = y.nearest(3.5), below = y.nearest(0.5);
  CHECK(std::abs(k43 * P.R[above] - I_UNIT * shear().eval(y.node(above), 3)) <= 1e-6);
  CHECK(std::abs(k43 * P.R[below]) <= 1e-6);
  CHECK(std::abs(P.lambda.real() - test::hyperbolic().sc.sigma0 * std::cbrt(256.0)) <= 1e-12);
}

TEST_CASE("profile norms stay bounded and approach the limit") {
  const ProfileSetK a = profiles_at(128), b = profiles_at(1024);
  CHECK(b.norm_U / a.norm_U <= 3.0);
  CHECK(a.norm_U / b.norm_U <= 3.0);
  CHECK(b.limit_deviation < a.limit_deviation);
  CHECK(b.norm_R_scaled / a.norm_R_scaled <= 3.0);
}

TEST_CASE("underresolved profile grid") {
  const auto& sc = test::hyperbolic().sc;
  const Grid1D y = Grid1D::with_node_at(0.0, 12.0, 2.0, 0.05);
  CHECK_THROWS_AS(build_profile_set(4096, test::layer(), sc, shear(), y, 1.0), ResolutionError);
}

}
