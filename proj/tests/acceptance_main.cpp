// Acceptance suite: runs the full and the quick verification profiles and prints one line per criterion.
#include "blayer/error.hpp"
#include "blayer/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace blayer;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
  bool manifest_complete = false;
};

Run run_profile(RunConfig cfg, const fs::path& out, bool verbose) {
  fs::remove_all(out);
  cfg.out = out.string();
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream sink;
  std::ostream& log = verbose ? std::cerr : static_cast<std::ostream&>(sink);
  Run r;
  {
    Pipeline p(cfg, log);
    bool ok = false;
    try {
      ok = p.verify();
    } catch (const Error& e) {
      log << "error: " << e.what() << "\n";
    }
    r.code = ok ? 0 : 1;
    p.write_manifest("verify", r.code);
    r.checks = p.checks();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Json m = read_json((out / "manifest.json").string());
  r.manifest_complete = true;
  for (const auto& f : m.at("files")) {
    const std::string name = f.is_string() ? f.get<std::string>() : f.at("path").get<std::string>();
    if (!fs::exists(out / name)) r.manifest_complete = false;
  }
  return r;
}

} // namespace

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  const fs::path root = fs::temp_directory_path() / "blayer_acceptance";

  const Run full = run_profile(RunConfig{}, root / "full", verbose);
  for (const auto& c : full.checks) std::printf("%s\n", format_check(c).c_str());

  RunConfig q;
  q.apply_quick();
  const Run quick = run_profile(q, root / "quick", verbose);
  bool quick_ok = quick.code == 0;
  for (const auto& c : quick.checks)
    if (!c.passed) std::printf("  quick profile: %s\n", format_check(c).c_str());

  const bool full_ok = full.code == 0 && full.checks.size() == 12;
  const bool pass13 = full_ok && quick_ok && full.seconds <= 1800.0 && quick.seconds <= 300.0 &&
                      full.manifest_complete && quick.manifest_complete;
  char line[256];
  std::snprintf(line, sizeof line,
                "%s 13 end-to-end: full %s in %.1f s, quick %s in %.1f s, manifests %s", pass13 ? "PASS" : "FAIL",
                full_ok ? "passed" : "failed", full.seconds, quick_ok ? "passed" : "failed", quick.seconds,
                full.manifest_complete && quick.manifest_complete ? "complete" : "incomplete");
  std::printf("%s\n", line);
  fs::remove_all(root);
  return pass13 ? 0 : 1;
}
