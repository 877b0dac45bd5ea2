#pragma once

// Static SVG line plots. Output depends only on the data, so identical
// inputs give identical bytes.

#include <filesystem>
#include <string>
#include <vector>

namespace sben {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw markers at the data points instead of a polyline.
  bool markers = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  /// Plot log10 of |y| (zero and non-finite values are skipped).
  bool log_y = false;
};

/// SVG document for the plot; non-finite points are dropped.
std::string render_svg(const LinePlot& plot);
void write_svg(const std::filesystem::path& path, const LinePlot& plot);

}  // namespace sben
