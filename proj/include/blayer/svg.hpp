#pragma once
/// Minimal SVG 1.1 line plots: polylines, axes, ticks and a legend.

#include <string>
#include <vector>

namespace blayer::svg {

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
};

struct Plot {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;
  int width = 640, height = 420;
};

/// Renders the plot. Points that are non-finite (or non-positive on a log axis) are dropped.
std::string render(const Plot& p);

} // namespace blayer::svg
