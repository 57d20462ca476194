#pragma once
/// Exception hierarchy. Each error carries the process exit code the CLI maps it to.

#include <stdexcept>
#include <string>

namespace blayer {

/// Exit codes: 0 pass, 1 verification failure, 2 spectral failure, 3 resolution/config failure.
enum class ExitCode : int { Ok = 0, Verification = 1, Spectral = 2, Resolution = 3 };

class Error : public std::runtime_error {
public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

private:
  ExitCode code_;
};

/// Non-finite samples or mismatched lengths.
struct InvalidProfile : Error {
  explicit InvalidProfile(const std::string& w) : Error("invalid profile: " + w, ExitCode::Verification) {}
};

/// Grid too small, point outside the domain, underresolved layer.
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& w) : Error("resolution error: " + w, ExitCode::Resolution) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("configuration error: " + w, ExitCode::Resolution) {}
};

/// No admissible eigenvalue, inconsistent γ, vanishing average, degenerate curvature.
struct SpectralFailure : Error {
  explicit SpectralFailure(const std::string& w) : Error("spectral failure: " + w, ExitCode::Spectral) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& w) : Error("non-convergence: " + w, ExitCode::Spectral) {}
};

/// Norm overflow during time stepping.
struct BlowUp : Error {
  BlowUp(const std::string& w, double t)
      : Error("blow-up at t=" + std::to_string(t) + ": " + w, ExitCode::Verification), time(t) {}
  double time;
};

} // namespace blayer
