#include "blayer/svg.hpp"
#include "blayer/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace blayer::svg {

namespace {

constexpr const char* COLORS[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
    case '&': o += "&amp;"; break;
    case '<': o += "&lt;"; break;
    case '>': o += "&gt;"; break;
    case '"': o += "&quot;"; break;
    default: o += c;
    }
  }
  return o;
}

struct Axis {
  bool log = false;
  double lo = 0, hi = 1;
  double map(double v) const { return log ? std::log10(v) : v; }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0); }

} // namespace

std::string render(const Plot& p) {
  Axis ax{p.logx}, ay{p.logy};
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], p.logx) || !usable(s.y[i], p.logy)) continue;
      xmin = std::min(xmin, ax.map(s.x[i])), xmax = std::max(xmax, ax.map(s.x[i]));
      ymin = std::min(ymin, ay.map(s.y[i])), ymax = std::max(ymax, ay.map(s.y[i]));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-300) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-300) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ax.lo = xmin, ax.hi = xmax, ay.lo = ymin - pad, ay.hi = ymax + pad;

  const double W = p.width, H = p.height, l = 70, r = 20, t = 40, b = 55;
  auto px = [&](double v) { return l + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * (W - l - r); };
  auto py = [&](double v) { return H - b - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * (H - t - b); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(p.width) +
       "\" height=\"" + std::to_string(p.height) + "\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + fmt("%.1f", W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(p.title) +
       "</text>\n";
  o += "<rect x=\"" + fmt("%.1f", l) + "\" y=\"" + fmt("%.1f", t) + "\" width=\"" + fmt("%.1f", W - l - r) +
       "\" height=\"" + fmt("%.1f", H - t - b) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // five ticks per axis, labelled in data units
  for (int i = 0; i <= 4; ++i) {
    const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0, fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double vx = p.logx ? std::pow(10.0, fx) : fx, vy = p.logy ? std::pow(10.0, fy) : fy;
    const double X = l + (W - l - r) * i / 4.0, Y = H - b - (H - t - b) * i / 4.0;
    o += "<line x1=\"" + fmt("%.1f", X) + "\" y1=\"" + fmt("%.1f", H - b) + "\" x2=\"" + fmt("%.1f", X) + "\" y2=\"" +
         fmt("%.1f", H - b + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.1f", X) + "\" y=\"" + fmt("%.1f", H - b + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + fmt("%.3g", vx) + "</text>\n";
    o += "<line x1=\"" + fmt("%.1f", l - 5) + "\" y1=\"" + fmt("%.1f", Y) + "\" x2=\"" + fmt("%.1f", l) + "\" y2=\"" +
         fmt("%.1f", Y) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.1f", l - 8) + "\" y=\"" + fmt("%.1f", Y + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt("%.3g", vy) + "</text>\n";
  }
  o += "<text x=\"" + fmt("%.1f", (l + W - r) / 2) + "\" y=\"" + fmt("%.1f", H - 12) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + escape(p.xlabel + (p.logx ? " (log)" : "")) + "</text>\n";
  o += "<text x=\"16\" y=\"" + fmt("%.1f", (t + H - b) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
       fmt("%.1f", (t + H - b) / 2) + ")\">" + escape(p.ylabel + (p.logy ? " (log)" : "")) + "</text>\n";

  for (std::size_t si = 0; si < p.series.size(); ++si) {
    const auto& s = p.series[si];
    const char* color = COLORS[si % std::size(COLORS)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], p.logx) || !usable(s.y[i], p.logy)) continue;
      pts += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i])) + " ";
    }
    if (!pts.empty()) pts.pop_back();
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
    const double ly = t + 16 + 16.0 * static_cast<double>(si);
    o += "<line x1=\"" + fmt("%.1f", W - r - 150) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" +
         fmt("%.1f", W - r - 125) + "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color + "\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    o += "<text x=\"" + fmt("%.1f", W - r - 120) + "\" y=\"" + fmt("%.1f", ly + 4) + "\" font-size=\"11\">" +
         escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

} // namespace blayer::svg
