#include "blayer/shear.hpp"
#include "blayer/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blayer {

std::string to_string(ShearFamily f) {
  switch (f) {
  case ShearFamily::GaussianBump: return "gaussian";
  case ShearFamily::Quadratic: return "quadratic";
  case ShearFamily::UserTable: return "table";
  }
  return "?";
}

ShearFamily shear_family_from_string(const std::string& s) {
  if (s == "gaussian" || s == "gaussian-bump") return ShearFamily::GaussianBump;
  if (s == "quadratic") return ShearFamily::Quadratic;
  if (s == "table" || s == "user-table") return ShearFamily::UserTable;
  throw ConfigError("unknown shear family '" + s + "'");
}

ShearTable ShearTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open shear table " + path);
  ShearTable t;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double v[6];
    for (double& x : v)
      if (!(ss >> x)) throw ConfigError("malformed shear table row: " + line);
    t.y.push_back(v[0]);
    for (int j = 0; j < 5; ++j) t.d[j].push_back(v[j + 1]);
  }
  if (t.y.size() < 4) throw ConfigError("shear table needs >= 4 rows");
  const double h = t.y[1] - t.y[0];
  for (std::size_t i = 1; i < t.y.size(); ++i)
    if (std::abs(t.y[i] - t.y[i - 1] - h) > 1e-9 * std::abs(h)) throw ConfigError("shear table must be uniform in y");
  return t;
}

ShearFlow ShearFlow::gaussian_bump(double a, double kappa, double beta) {
  if (!(a > 0) || !(kappa > 0) || !(beta >= 0)) throw ConfigError("gaussian bump needs a > 0, kappa > 0, beta >= 0");
  ShearFlow s;
  s.family_ = ShearFamily::GaussianBump;
  s.a_ = a, s.kappa_ = kappa, s.beta_ = beta;
  return s;
}

ShearFlow ShearFlow::quadratic(double a) {
  if (!(a > 0)) throw ConfigError("quadratic shear needs a > 0");
  ShearFlow s;
  s.family_ = ShearFamily::Quadratic;
  s.a_ = a;
  return s;
}

ShearFlow ShearFlow::table(ShearTable t, double a) {
  if (a < t.y.front() || a > t.y.back()) throw ConfigError("critical point outside shear table");
  ShearFlow s;
  s.family_ = ShearFamily::UserTable;
  s.a_ = a;
  s.table_ = std::make_shared<const ShearTable>(std::move(t));
  return s;
}

double ShearFlow::eval(double y, int d) const {
  if (d < 0 || d > 4) throw ConfigError("shear derivative order must be 0..4");
  const double e = y - a_;
  switch (family_) {
  case ShearFamily::GaussianBump: {
    const double b = beta_, e2 = e * e, E = std::exp(-b * e2);
    // U = -κ e² E; derivatives are polynomial(e)·E
    switch (d) {
    case 0: return -kappa_ * e2 * E;
    case 1: return -kappa_ * (2 * e - 2 * b * e2 * e) * E;
    case 2: return -kappa_ * (2 - 10 * b * e2 + 4 * b * b * e2 * e2) * E;
    case 3: return -kappa_ * (-24 * b * e + 36 * b * b * e2 * e - 8 * b * b * b * e2 * e2 * e) * E;
    default: return -kappa_ * (-24 * b + 156 * b * b * e2 - 112 * b * b * b * e2 * e2 + 16 * b * b * b * b * e2 * e2 * e2) * E;
    }
  }
  case ShearFamily::Quadratic:
    switch (d) {
    case 0: return e * e / 2;
    case 1: return e;
    case 2: return 1.0;
    default: return 0.0;
    }
  case ShearFamily::UserTable: {
    const auto& t = *table_;
    const std::size_t n = t.y.size();
    const double h = t.y[1] - t.y[0];
    double s = std::clamp((y - t.y[0]) / h, 0.0, static_cast<double>(n - 1));
    auto j = std::min<std::size_t>(static_cast<std::size_t>(s), n - 2);
    const double u = s - static_cast<double>(j);
    if (d == 4) return (1 - u) * t.d[4][j] + u * t.d[4][j + 1];
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * t.d[d][j] + (u3 - 2 * u2 + u) * h * t.d[d + 1][j] +
           (-2 * u3 + 3 * u2) * t.d[d][j + 1] + (u3 - u2) * h * t.d[d + 1][j + 1];
  }
  }
  return 0.0;
}

void ShearFlow::require_prandtl_admissible() const {
  if (std::abs(eval(a_, 1)) > 1e-12) throw SpectralFailure("U_s'(a) != 0");
  if (curvature() == 0.0) throw SpectralFailure("degenerate curvature U_s''(a) = 0");
}

void ShearFlow::require_hyperbolic_admissible() const {
  require_prandtl_admissible();
  if (std::abs(eval(a_, 0)) > 1e-12) throw SpectralFailure("U_s(a) != 0");
}

double ShearFlow::sup_on(const Grid1D& g, int d, double shift) const {
  double m = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) m = std::max(m, std::abs(eval(g.node(j), d) - shift));
  return m;
}

} // namespace blayer
