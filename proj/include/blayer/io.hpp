#pragma once
/// JSON documents (doubles as 17-significant-digit strings) and CSV tables.

#include "blayer/evolution.hpp"
#include "blayer/profiles.hpp"
#include "blayer/spectral.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace blayer {

using Json = nlohmann::json;

Json num(double v);
Json num(cplx v); ///< {"re": ..., "im": ...}
double get_double(const Json& j);
cplx get_cplx(const Json& j);

Json to_json(const Grid1D& g);
Grid1D grid_from_json(const Json& j);
Json to_json(const ComplexProfile& p);
ComplexProfile profile_from_json(const Json& j);

Json to_json(const Eigenpair& e);
Json to_json(const XProfile& x);
Json to_json(const WProfile& w);
WProfile wprofile_from_json(const Json& j);
Json to_json(const SpectralConstants& sc);
SpectralConstants constants_from_json(const Json& j);
Json to_json(const ProfileSetK& p);
Json to_json(const BoundsSummary& b);
Json to_json(const Trajectory& t);
Json to_json(const InflationReport& r);

/// Writes the document with two-space indentation and a trailing newline.
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// CSV with a header row; numbers in `%.17g`.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace blayer
