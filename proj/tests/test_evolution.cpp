#include "fixtures.hpp"

#include "blayer/error.hpp"

#include <doctest.h>

using namespace blayer;

namespace {

const ShearFlow& shear() {
  static const ShearFlow s = ShearFlow::gaussian_bump();
  return s;
}

const Grid1D& coarse() {
  static const Grid1D g = Grid1D::with_node_at(0.0, 12.0, 2.0, 0.01);
  return g;
}

CVec bump(const Grid1D& g, double c, cplx amp) {
  CVec v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = g.node(j);
    v[j] = amp * y * (g.hi() - y) * std::exp(-(y - c) * (y - c));
  }
  return v;
}

EvolveConfig small_cfg() {
  EvolveConfig c;
  c.samples = 10;
  return c;
}

ProfileSetK profiles_at(double k) {
  const auto& sc = test::hyperbolic().sc;
  return build_profile_set(k, test::layer(), sc, shear(), make_ygrid(sc, shear(), k, 1.0, {}), 1.0);
}

} // namespace

TEST_SUITE("evolution") {

TEST_CASE("B is linear and vanishes on zero") {
  const Grid1D& g = coarse();
  CHECK(wnorm(apply_B(32, shear(), ComplexProfile(g)), {0, 0}) == 0.0);
  const ComplexProfile u(g, bump(g, 2.0, 1.0)), v(g, bump(g, 3.0, cplx(0, 2)));
  const cplx a{0.3, -1.2};
  CVec w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) w[j] = u[j] + a * v[j];
  const ComplexProfile Bu = apply_B(32, shear(), u), Bv = apply_B(32, shear(), v),
                       Bw = apply_B(32, shear(), ComplexProfile(g, w));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(Bw[j] - Bu[j] - a * Bv[j]));
  CHECK(err <= 1e-12 * (1 + wnorm(Bu, {0, 0})));
}

TEST_CASE("zero data stays zero") {
  const Grid1D& g = coarse();
  const StateVector zero{CVec(g.size()), CVec(g.size()), 0.0};
  const Trajectory t = evolve(32, shear(), g, zero, {}, 0.5, small_cfg());
  for (double n : t.norms) CHECK(n == 0.0);
  CHECK(t.steps * t.dt == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("linearity and semigroup of the hyperbolic flow") {
  const Grid1D& g = coarse();
  const double k = 32;
  EvolveConfig c = small_cfg();
  c.fixed_dt = 0.5 * hyperbolic_dt(k, shear(), g, c.cfl);
  const StateVector u{bump(g, 2.0, 1.0), bump(g, 2.5, 0.5), 0.0};
  const StateVector v{bump(g, 3.0, cplx(0, 1)), CVec(g.size()), 0.0};
  const cplx a{2.0, -0.5};
  StateVector w{CVec(g.size()), CVec(g.size()), 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) w.u[j] = u.u[j] + a * v.u[j], w.w[j] = u.w[j] + a * v.w[j];
  const double T = 200 * c.fixed_dt;
  const CVec Tu = evolve(k, shear(), g, u, {}, T, c).final_state.u;
  const CVec Tv = evolve(k, shear(), g, v, {}, T, c).final_state.u;
  const CVec Tw = evolve(k, shear(), g, w, {}, T, c).final_state.u;
  double err = 0.0, size = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(Tw[j] - Tu[j] - a * Tv[j]));
    size = std::max(size, std::abs(Tw[j]));
  }
  CHECK(err <= 1e-12 * size);
  // semigroup: two halves equal one full run with the same steps
  StateVector half = evolve(k, shear(), g, u, {}, T / 2, c).final_state;
  half.t = 0.0;
  const CVec two = evolve(k, shear(), g, half, {}, T / 2, c).final_state.u;
  CHECK(test::max_abs_diff(two, Tu) <= 1e-12 * size);
}

TEST_CASE("fixed step above the stability rule is rejected") {
  EvolveConfig c = small_cfg();
  c.fixed_dt = 10 * hyperbolic_dt(32, shear(), coarse(), c.cfl);
  const StateVector zero{CVec(coarse().size()), CVec(coarse().size()), 0.0};
  CHECK_THROWS_AS(evolve(32, shear(), coarse(), zero, {}, 1.0, c), ConfigError);
}

TEST_CASE("forced run reproduces the growing profile") {
  const auto& sc = test::hyperbolic().sc;
  const ProfileSetK P = profiles_at(64);
  EvolveConfig c = small_cfg();
  c.samples = 40;
  const double T = 1.0;
  const ForcedCheck f = forced_check(P, sc, shear(), T, c);
  CHECK(f.max_rel_deviation <= 1e-3);
  CHECK(std::abs(f.slope_ratio - 1.0) <= 0.02);
}

TEST_CASE("substitution residual is small and sees a wrong τ") {
  const auto& sc = test::hyperbolic().sc;
  const ProfileSetK P = profiles_at(64);
  const double r = substitution_residual(P, sc, shear());
  CHECK(r <= 1e-3);
  SpectralConstants bad = sc;
  bad.tau *= 1.1;
  const ProfileSetK Q = build_profile_set(64, test::layer(), bad, shear(), P.U.grid, 1.0);
  CHECK(substitution_residual(Q, bad, shear()) >= 100 * r);
}

TEST_CASE("Duhamel identity with zero forcing is exact") {
  const ProfileSetK P = profiles_at(32);
  EvolveConfig c = small_cfg();
  const DuhamelResult d = duhamel_check(P, shear(), 0.25, 4, c, true);
  CHECK(d.discrepancy <= 1e-12);
  CHECK_THROWS_AS(duhamel_check(P, shear(), 0.25, 3, c), ConfigError);
}

TEST_CASE("inflation window identity") {
  for (double k : {64.0, 1000.0, 4096.0}) {
    for (Model m : {Model::Hyperbolic, Model::Prandtl}) {
      const double s0 = 0.8, s = 0.4;
      const double p = m == Model::Hyperbolic ? 1.0 / 3.0 : 0.5;
      const double T = inflation_window(m, k, s0, s);
      CHECK(std::abs(std::exp(-(s0 - s) * std::pow(k, p) * T) - std::pow(k, -p)) <= 1e-12);
    }
  }
  CHECK(inflation_data_from_string(to_string(InflationData::Growing)) == InflationData::Growing);
  CHECK_THROWS_AS(inflation_data_from_string("bogus"), ConfigError);
}

TEST_CASE("single-mode Sobolev norm") {
  CHECK(single_mode_norm(100, 2, 2, 3.5) == 3.5);
  CHECK(single_mode_norm(100, 0, 0, 1.0) == 1.0);
  CHECK(single_mode_norm(100, 2, 1.75, 1.0) == doctest::Approx(std::pow(1.0 + 1e4, -0.125)).epsilon(1e-14));
}

TEST_CASE("inflation data is unit size") {
  const auto& sc = test::hyperbolic().sc;
  const ProfileSetK P = profiles_at(128);
  const InflationInitial in = inflation_initial(P, sc, InflationData::Profile);
  CHECK(wnorm(ComplexProfile(P.U.grid, in.state.u), {1.0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& w : in.state.w) CHECK(w == cplx(0.0));
}

TEST_CASE("Sobolev demo rejects μ outside [0, 1/3)") {
  const auto& sc = test::hyperbolic().sc;
  CHECK_THROWS_AS(sobolev_demo(2, 0.5, 0.5, {64}, test::layer(), sc, shear(), {}), ConfigError);
  // no admissible k: T_k > δ for all k in the list
  const SobolevDemoReport r = sobolev_demo(0, 0, 1e-6, {64}, test::layer(), sc, shear(), {});
  CHECK_FALSE(r.feasible);
}

}
