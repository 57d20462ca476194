#include "blayer/error.hpp"
#include "blayer/numerics.hpp"
#include "blayer/shear.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace blayer;

namespace {

ComplexProfile sample(const Grid1D& g, auto f) {
  ComplexProfile p(g);
  for (std::size_t j = 0; j < g.size(); ++j) p[j] = f(g.node(j));
  return p;
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("grid invariants") {
  const Grid1D g = Grid1D::with_node_at(0.0, 12.0, 2.0, 0.0023);
  REQUIRE(g.mark());
  CHECK(std::abs(g.node(g.mark_index()) - 2.0) <= 1e-12 * g.h());
  CHECK(g.h() <= 0.0023);
  CHECK(g.hi() >= 12.0 - 1e-12);
  const Grid1D s = Grid1D::symmetric(12.0, 100);
  CHECK(s.size() == 101);
  CHECK(s.node(s.mark_index()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(Grid1D::uniform(0.0, 1.0, 1), ResolutionError);
  CHECK_THROWS_AS(Grid1D::with_node_at(0.0, 1.0, 2.0, 0.1), ResolutionError);
}

TEST_CASE("profile validation") {
  const Grid1D g = Grid1D::uniform(0, 1, 5);
  ComplexProfile p(g);
  p[2] = cplx(NAN, 0);
  CHECK_FALSE(p.finite());
  CHECK_THROWS_AS(p.validate(), InvalidProfile);
  CHECK_THROWS_AS(wnorm(p, {}), InvalidProfile);
  CHECK_THROWS_AS(ComplexProfile(g, CVec(3)), InvalidProfile);
}

TEST_CASE("weighted norm examples") {
  const Grid1D g = Grid1D::uniform(0, 10, 10001);
  CHECK(wnorm(ComplexProfile(g), {1.0, 0}) == 0.0);
  CHECK(wnorm(sample(g, [](double y) { return std::exp(-y); }), {1.0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  const Grid1D g2 = Grid1D::uniform(0, 20, 20001);
  const ComplexProfile f = sample(g2, [](double y) { return std::exp(-2 * y); });
  double brute = 0.0;
  for (std::size_t j = 0; j < g2.size(); ++j) brute = std::max(brute, std::exp(g2.node(j)) * std::abs(f[j]));
  CHECK(wnorm(f, {1.0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wnorm(f, {1.0, 0}) == brute);
  // s = 1 adds the derivative norm: e^{y}|f'| = 2 e^{-y}, max 2 at y = 0
  CHECK(wnorm(f, {1.0, 1}) == doctest::Approx(3.0).epsilon(1e-5));
  // restriction
  CHECK(wnorm(f, {1.0, 0}, 1.0, 20.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("weighted norm homogeneity and triangle inequality") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  const Grid1D g = Grid1D::uniform(0, 5, 801);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexProfile f(g), h(g), sum(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      f[j] = {n01(rng), n01(rng)};
      h[j] = {n01(rng), n01(rng)};
      sum[j] = f[j] + h[j];
    }
    const cplx c{n01(rng), n01(rng)};
    ComplexProfile cf(g);
    for (std::size_t j = 0; j < g.size(); ++j) cf[j] = c * f[j];
    for (int s : {0, 1}) {
      const WeightedNormParams p{0.7, s};
      CHECK(wnorm(cf, p) == doctest::Approx(std::abs(c) * wnorm(f, p)).epsilon(1e-13));
      CHECK(wnorm(sum, p) <= wnorm(f, p) + wnorm(h, p) + 1e-12);
    }
  }
}

TEST_CASE("differentiation") {
  const Grid1D g = Grid1D::uniform(0, 3, 3001);
  const ComplexProfile c = sample(g, [](double) { return 2.5; });
  CHECK(wnorm(differentiate(c, 1), {0, 0}) <= 1e-10);
  const ComplexProfile q = sample(g, [](double y) { return y * y; });
  const ComplexProfile d2 = differentiate(q, 2);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(d2[j] - 2.0) <= 1e-6);
  const ComplexProfile s = sample(g, [](double y) { return std::sin(y); });
  const ComplexProfile d1 = differentiate(s, 1);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d1[j] - std::cos(g.node(j))));
  CHECK(err <= 1e-6);
  CHECK_THROWS_AS(differentiate(ComplexProfile(Grid1D::uniform(0, 1, 4)), 1), ResolutionError);
}

TEST_CASE("cumulative integral") {
  const Grid1D g = Grid1D::uniform(0, 1, 1001);
  const ComplexProfile one = cumulative_integral(sample(g, [](double) { return 1.0; }));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(one[j] - g.node(j)) <= 1e-12);
  CHECK(wnorm(cumulative_integral(ComplexProfile(g)), {0, 0}) == 0.0);
  const Grid1D gp = Grid1D::uniform(0, std::numbers::pi, 3142);
  const ComplexProfile s = cumulative_integral(sample(gp, [](double y) { return std::cos(y); }));
  double err = 0.0;
  for (std::size_t j = 0; j < gp.size(); ++j) err = std::max(err, std::abs(s[j] - std::sin(gp.node(j))));
  CHECK(err <= 1e-6);
}

TEST_CASE("differentiate then integrate recovers f - f(lo) at second order") {
  double prev = 0.0;
  for (std::size_t n : {201, 401, 801}) {
    const Grid1D g = Grid1D::uniform(0, 2, n);
    const ComplexProfile f = sample(g, [](double y) { return std::exp(std::sin(2 * y)); });
    const ComplexProfile r = cumulative_integral(differentiate(f, 1));
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(r[j] - (f[j] - f[0])));
    if (prev > 0) CHECK(prev / err > 3.0);
    prev = err;
  }
}

TEST_CASE("heaviside convention") {
  const Grid1D g = Grid1D::uniform(0, 2, 201);
  const ComplexProfile H = heaviside_profile(g, 1.0);
  CHECK(H[100] == cplx(1.0));
  CHECK(H[99] == cplx(0.0));
  const ComplexProfile all = heaviside_profile(g, 0.0);
  for (const auto& v : all.values) CHECK(v == cplx(1.0));
  CHECK_THROWS_AS(heaviside_profile(g, 3.0), ResolutionError);
  // H(y-a)(y-a)² is continuous at a: nodal jump ≤ h²
  double jump = 0.0;
  for (std::size_t j = 99; j <= 100; ++j) jump = std::max(jump, std::abs(H[j] * std::pow(g.node(j) - 1.0, 2)));
  CHECK(jump <= g.h() * g.h() + 1e-15);
}

TEST_CASE("tridiagonal solve") {
  const std::size_t n = 50;
  CVec lo(n, cplx(-1, 0.2)), di(n, cplx(4, 1)), up(n, cplx(-1, -0.3)), x(n), b(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {std::sin(double(i)), std::cos(double(i))};
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = di[i] * x[i];
    if (i > 0) b[i] += lo[i] * x[i - 1];
    if (i + 1 < n) b[i] += up[i] * x[i + 1];
  }
  const Tridiagonal t(lo, di, up);
  t.solve(b);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(b[i] - x[i]) <= 1e-13);
}

TEST_CASE("hermite interpolation and line fits") {
  const Grid1D g = Grid1D::uniform(-1, 1, 41);
  CVec f(g.size()), df(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(g.node(j)), df[j] = std::exp(g.node(j));
  const HermiteInterpolant h(g, f, df, -7.0, 9.0);
  CHECK(std::abs(h(0.3141) - std::exp(0.3141)) <= 1e-7);
  CHECK(h(-2.0) == cplx(-7.0));
  CHECK(h(2.0) == cplx(9.0));
  const std::vector<double> x{1, 2, 4, 8}, y{3, 6, 12, 24};
  CHECK(fit_loglog(x, y).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_line(x, y).slope == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("parallel map is index-deterministic") {
  std::vector<double> out(37);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sqrt(double(i)); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == std::sqrt(double(i)));
}

TEST_CASE("gaussian bump structure") {
  const ShearFlow s = ShearFlow::gaussian_bump(2.0, 1.0, 1.0);
  CHECK(std::abs(s.eval(2.0, 0)) <= 1e-12);
  CHECK(std::abs(s.eval(2.0, 1)) <= 1e-12);
  CHECK(s.curvature() == doctest::Approx(-2.0).epsilon(1e-12));
  // derivatives against central differences of the evaluator
  const double h = 1e-4;
  for (double y : {0.3, 1.7, 2.0, 2.6, 4.1}) {
    for (int d = 0; d < 4; ++d) {
      const double fd = (s.eval(y + h, d) - s.eval(y - h, d)) / (2 * h);
      CHECK(std::abs(fd - s.eval(y, d + 1)) <= 1e-6 * std::max(1.0, std::abs(s.eval(y, d + 1))));
    }
  }
  const double fd2 = (s.eval(2.0 + h) - 2 * s.eval(2.0) + s.eval(2.0 - h)) / (h * h);
  CHECK(std::abs(fd2 - (-2.0)) / 2.0 <= 1e-6);
  CHECK_NOTHROW(s.require_hyperbolic_admissible());
  const Grid1D g = Grid1D::uniform(0, 30, 3001);
  for (int d = 0; d <= 4; ++d) {
    ComplexProfile p(g);
    for (std::size_t j = 0; j < g.size(); ++j) p[j] = s.eval(g.node(j), d);
    CHECK(wnorm(p, {1.0, 0}) < 1e3);
  }
  CHECK(ShearFlow::gaussian_bump(2.0, 2.0).curvature() == doctest::Approx(-4.0));
}

TEST_CASE("quadratic shear is Prandtl-admissible and non-decaying") {
  const ShearFlow q = ShearFlow::quadratic(2.0);
  CHECK_FALSE(q.decaying());
  CHECK(q.curvature() == doctest::Approx(1.0));
  CHECK(q.eval(2.0, 3) == 0.0);
  CHECK_NOTHROW(q.require_prandtl_admissible());
}

}
