#include "blayer/io.hpp"
#include "blayer/config.hpp"
#include "blayer/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace blayer {

Json num(double v) { return format_double(v); }
Json num(cplx v) { return Json{{"re", num(v.real())}, {"im", num(v.imag())}}; }

double get_double(const Json& j) {
  try {
    if (j.is_string()) return std::stod(j.get<std::string>());
    return j.get<double>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed number in document: ") + e.what());
  }
}

cplx get_cplx(const Json& j) { return {get_double(j.at("re")), get_double(j.at("im"))}; }

Json to_json(const Grid1D& g) {
  Json j{{"lo", num(g.lo())}, {"h", num(g.h())}, {"n", g.size()}, {"hi", num(g.hi())}};
  j["mark"] = g.mark() ? Json(*g.mark()) : Json(nullptr);
  return j;
}

Grid1D grid_from_json(const Json& j) {
  std::optional<std::size_t> mark;
  if (j.contains("mark") && !j["mark"].is_null()) mark = j["mark"].get<std::size_t>();
  return Grid1D::from_parts(get_double(j.at("lo")), get_double(j.at("h")), j.at("n").get<std::size_t>(), mark);
}

Json to_json(const ComplexProfile& p) {
  Json re = Json::array(), im = Json::array();
  for (const auto& v : p.values) re.push_back(num(v.real())), im.push_back(num(v.imag()));
  return Json{{"grid", to_json(p.grid)}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexProfile profile_from_json(const Json& j) {
  try {
    const Grid1D g = grid_from_json(j.at("grid"));
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != g.size() || im.size() != g.size()) throw InvalidProfile("array length differs from grid");
    CVec v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {get_double(re[i]), get_double(im[i])};
    ComplexProfile p(g, std::move(v));
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed profile document: ") + e.what());
  }
}

Json to_json(const Eigenpair& e) {
  Json c = Json::array();
  for (const auto& k : e.candidates)
    c.push_back({{"alpha", num(k.alpha)}, {"envelope_ratio", num(k.envelope_ratio)}, {"decays", k.decays}});
  return Json{{"alpha", num(e.alpha)},
              {"alpha_discrete", num(e.alpha_discrete)},
              {"alpha_fine", num(e.alpha_fine)},
              {"residual", num(e.residual)},
              {"envelope_ratio", num(e.envelope_ratio)},
              {"parity", e.parity},
              {"parity_defect", num(e.parity_defect)},
              {"candidates", std::move(c)},
              {"xbar", num(e.options.xbar)},
              {"n", e.options.n},
              {"f", to_json(e.f)}};
}

Json to_json(const XProfile& x) {
  return Json{{"gamma", num(x.gamma)},   {"coefficient", num(x.coef)},
              {"defect", num(x.defect)}, {"integral", num(x.integral)},
              {"abs_integral", num(x.abs_integral)}, {"envelope_ratio", num(x.envelope_ratio)},
              {"X", to_json(x.X)},       {"dX", to_json(x.dX)}};
}

Json to_json(const WProfile& w) {
  return Json{{"gamma", num(w.gamma)},          {"coefficient", num(w.coef)},
              {"residual", num(w.residual)},    {"left_value", num(w.left_value)},
              {"right_defect", num(w.right_defect)}, {"W", to_json(w.W)},
              {"Wp", to_json(w.Wp)},            {"Wpp", to_json(w.Wpp)},
              {"Wm1", to_json(w.Wm1)}};
}

WProfile wprofile_from_json(const Json& j) {
  WProfile w;
  w.gamma = get_cplx(j.at("gamma"));
  w.coef = get_cplx(j.at("coefficient"));
  w.residual = get_double(j.at("residual"));
  w.left_value = get_double(j.at("left_value"));
  w.right_defect = get_double(j.at("right_defect"));
  w.W = profile_from_json(j.at("W"));
  w.Wp = profile_from_json(j.at("Wp"));
  w.Wpp = profile_from_json(j.at("Wpp"));
  w.Wm1 = profile_from_json(j.at("Wm1"));
  return w;
}

Json to_json(const SpectralConstants& sc) {
  return Json{{"model", to_string(sc.model)}, {"alpha", num(sc.alpha)},   {"gamma", num(sc.gamma)},
              {"tau", num(sc.tau)},            {"sigma0", num(sc.sigma0)}, {"scale", num(sc.scale)},
              {"curvature_sign", sc.curvature_sign}};
}

SpectralConstants constants_from_json(const Json& j) {
  try {
    SpectralConstants sc;
    sc.model = model_from_string(j.at("model").get<std::string>());
    sc.alpha = get_double(j.at("alpha"));
    sc.gamma = get_cplx(j.at("gamma"));
    sc.tau = get_cplx(j.at("tau"));
    sc.sigma0 = get_double(j.at("sigma0"));
    sc.scale = get_double(j.at("scale"));
    sc.curvature_sign = j.at("curvature_sign").get<int>();
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed constants document: ") + e.what());
  }
}

Json to_json(const ProfileSetK& p) {
  return Json{{"model", to_string(p.model)},
              {"k", num(p.k)},
              {"alpha", num(p.alpha)},
              {"lambda", num(p.lambda)},
              {"forcing_scale", num(p.forcing_scale)},
              {"norm_U", num(p.norm_U)},
              {"norm_R_scaled", num(p.norm_R_scaled)},
              {"V_discrepancy", num(p.V_discrepancy)},
              {"limit_deviation", num(p.limit_deviation)},
              {"U", to_json(p.U)},
              {"V", to_json(p.V)},
              {"R", to_json(p.R)},
              {"F1", to_json(p.F1)},
              {"F2", to_json(p.F2)}};
}

Json to_json(const BoundsSummary& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows)
    rows.push_back({{"k", num(r.k)}, {"norm_U", num(r.norm_U)}, {"norm_R_scaled", num(r.norm_R_scaled)},
                    {"limit_deviation", num(r.limit_deviation)}});
  return Json{{"rows", std::move(rows)},
              {"ratio_U", num(b.ratio_U)},
              {"min_U", num(b.min_U)},
              {"max_U", num(b.max_U)},
              {"limit_norm", num(b.limit_norm)},
              {"top_octave_R_factor", num(b.top_octave_R_factor)},
              {"max_R_scaled", num(b.max_R_scaled)},
              {"limit_rate", num(b.limit_rate)}};
}

Json to_json(const Trajectory& t) {
  Json times = Json::array(), norms = Json::array();
  for (double v : t.times) times.push_back(num(v));
  for (double v : t.norms) norms.push_back(num(v));
  return Json{{"k", num(t.k)},       {"dt", num(t.dt)},       {"steps", t.steps},
              {"grid", to_json(t.grid)}, {"times", std::move(times)}, {"norms", std::move(norms)}};
}

Json to_json(const InflationReport& r) {
  Json recs = Json::array();
  for (const auto& x : r.records)
    recs.push_back({{"k", num(x.k)},
                    {"sigma", num(x.sigma)},
                    {"T", num(x.T)},
                    {"S", num(x.S)},
                    {"t_argmax", num(x.t_argmax)},
                    {"C_ref", num(x.C_ref)},
                    {"data_norm", num(x.data_norm)},
                    {"window_identity_error", num(x.window_identity_error)},
                    {"norm_U", num(x.norm_U)},
                    {"norm_R_scaled", num(x.norm_R_scaled)}});
  return Json{{"model", to_string(r.model)},
              {"data", to_string(r.data)},
              {"sigma0", num(r.sigma0)},
              {"sigma", num(r.sigma)},
              {"C_sigma", num(r.C_sigma)},
              {"exponent", num(r.exponent)},
              {"strictly_increasing", r.strictly_increasing},
              {"records", std::move(recs)}};
}

namespace {

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

} // namespace

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream s;
  for (std::size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
  s << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << format_double(r[i]);
    s << "\n";
  }
  write_text(path, s.str());
}

} // namespace blayer
