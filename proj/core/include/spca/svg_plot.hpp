#pragma once

#include <string>
#include <vector>

namespace spca {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  // Fixed y range; when lo >= hi the range is taken from the data.
  double y_lo = 0.0;
  double y_hi = 1.0;
  std::vector<Series> series;
};

// Standalone SVG document. Non-finite points (and x <= 0 on a log axis)
// are skipped.
std::string render_svg(const LineChart& chart);

}  // namespace spca
