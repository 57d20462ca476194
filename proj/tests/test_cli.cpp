#include "blayer/config.hpp"
#include "blayer/error.hpp"
#include "blayer/io.hpp"
#include "blayer/pipeline.hpp"
#include "blayer/svg.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace blayer;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blayer_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig quick_config(const fs::path& out) {
  RunConfig c;
  c.apply_quick();
  c.out = out.string();
  return c;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing and canonical hash") {
  const std::string a = "model = hyperbolic\n# comment\nshear.a = 2.5\nks = 64, 128 ,256\nalpha = 0.75\n";
  const std::string b = "alpha=0.75   # trailing comment\nks = 64,128,256\nshear.a = 2.5\n\nmodel = hyperbolic\n";
  const RunConfig ca = parse_config(a), cb = parse_config(b);
  CHECK(ca.a == 2.5);
  CHECK(ca.ks == std::vector<double>{64, 128, 256});
  CHECK(ca.hash() == cb.hash());
  CHECK(ca.canonical() == cb.canonical());
  CHECK(ca.hash() != RunConfig{}.hash());
  RunConfig moved = ca;
  moved.out = "elsewhere";
  CHECK(moved.hash() == ca.hash());
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("nonsense = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = navier\n"), ConfigError);
  RunConfig c;
  c.sigma_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RunConfig d;
  d.ks = {256, 64};
  CHECK_THROWS_AS(d.validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/blayer.cfg"), ConfigError);
  RunConfig e;
  set_config_value(e, "eigen.n", "2000");
  CHECK(e.eigen.n == 2000);
}

TEST_CASE("quick mode restricts frequencies and resolution") {
  RunConfig c;
  c.apply_quick();
  CHECK(c.quick);
  for (double k : c.ks) CHECK(k <= 512);
  CHECK(c.eigen.n == RunConfig{}.eigen.n / 2);
  CHECK(c.sobolev_delta >= 0.8);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("json round trips") {
  const Grid1D g = Grid1D::with_node_at(0.0, 3.0, 1.0, 0.1);
  ComplexProfile p(g);
  for (std::size_t j = 0; j < g.size(); ++j) p[j] = {std::sin(g.node(j)) / 3.0, 1e-300 * j};
  const ComplexProfile q = profile_from_json(to_json(p));
  CHECK(q.grid == g);
  CHECK(q.values == p.values);
  SpectralConstants sc = spectral_constants_hyperbolic(1.0, -2.0);
  const SpectralConstants r = constants_from_json(to_json(sc));
  CHECK(r.gamma == sc.gamma);
  CHECK(r.tau == sc.tau);
  CHECK(r.sigma0 == sc.sigma0);
  CHECK(r.curvature_sign == sc.curvature_sign);
  CHECK(get_double(num(0.1)) == 0.1);
}

TEST_CASE("csv and svg writers") {
  const fs::path dir = scratch("writers");
  write_csv((dir / "t.csv").string(), {"k", "v"}, {{64, 0.5}, {128, 0.25}});
  CHECK(slurp(dir / "t.csv") == "k,v\n64,0.5\n128,0.25\n");
  svg::Plot plot;
  plot.title = "t";
  plot.logy = true;
  plot.series.push_back({"s", {0, 1, 2}, {1, 10, -1}});
  const std::string s1 = svg::render(plot), s2 = svg::render(plot);
  CHECK(s1 == s2);
  CHECK(s1.find("<svg") != std::string::npos);
  CHECK(s1.find("nan") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("spectrum artifacts are deterministic") {
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  std::ostringstream log;
  REQUIRE(run_command("spectrum", quick_config(d1), "", log) == 0);
  REQUIRE(run_command("spectrum", quick_config(d2), "", log) == 0);
  for (const char* f : {"constants.json", "eigenpair.json", "wprofile.json", "xprofile.json"}) {
    CHECK(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  const Json m = read_json((d1 / "manifest.json").string());
  CHECK(m.at("exit_code") == 0);
  CHECK(m.at("config_hash") == quick_config(d1).hash());
  CHECK(m.at("tool_version") == TOOL_VERSION);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("exit code 2 when the eigenvalue window is empty") {
  const fs::path d = scratch("exit2");
  RunConfig c = quick_config(d);
  set_config_value(c, "eigen.window_hi", "0.5");
  std::ostringstream log;
  CHECK(run_command("spectrum", c, "", log) == 2);
  CHECK(read_json((d / "manifest.json").string()).at("exit_code") == 2);
  fs::remove_all(d);
}

TEST_CASE("exit code 3 for an underresolved layer") {
  const fs::path d = scratch("exit3");
  RunConfig c = quick_config(d);
  set_config_value(c, "y.h_max", "0.5");
  set_config_value(c, "y.nodes_per_layer", "1");
  std::ostringstream log;
  CHECK(run_command("profiles", c, "", log) == 3);
  CHECK(run_command("frobnicate", c, "", log) == 3);
  fs::remove_all(d);
}

TEST_CASE("a corrupted stored tau fails verification") {
  const fs::path d = scratch("fault");
  const RunConfig c = quick_config(d);
  std::ostringstream log;
  REQUIRE(run_command("spectrum", c, "", log) == 0);
  Json j = read_json((d / "constants.json").string());
  const cplx tau = get_cplx(j.at("tau"));
  j["tau"] = num(tau * 1.1);
  write_json((d / "constants.json").string(), j);
  CHECK(run_command("verify", c, "", log) == 1);
  const Json acc = read_json((d / "acceptance.json").string());
  bool jump_failed = false;
  for (const auto& r : acc.at("checks"))
    if (r.at("id") == 4) jump_failed = !r.at("passed").get<bool>();
  CHECK(jump_failed);
  fs::remove_all(d);
}

}
