#include "spca/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace spca {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  auto xt = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!chart.log_x || x > 0.0);
  };

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      xmin = std::min(xmin, xt(s.x[i]));
      xmax = std::max(xmax, xt(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (chart.y_lo < chart.y_hi) {
    ymin = chart.y_lo;
    ymax = chart.y_hi;
  } else if (!(ymin <= ymax)) {
    ymin = 0.0;
    ymax = 1.0;
  } else if (ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (xt(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"15\">" << escape(chart.title) << "</text>\n";
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\""
    << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 5.0;
    const double gx = kLeft + pw * k / 5.0;
    const double xv = chart.log_x ? std::pow(10.0, fx) : fx;
    o << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(gx) << "\" y2=\""
      << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(kTop + ph + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(xv)
      << "</text>\n";
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    const double gy = py(yv);
    o << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(gy) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
      << fmt(gy) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(gy + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(chart.x_label)
    << (chart.log_x ? " (log scale)" : "") << "</text>\n";
  o << "<text transform=\"translate(18," << fmt(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << escape(chart.y_label) << "</text>\n";

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) pts.emplace_back(px(s.x[i]), py(s.y[i]));
    if (!pts.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i)
        o << (i ? " " : "") << fmt(pts[i].first) << ',' << fmt(pts[i].second);
      o << "\"/>\n";
      for (const auto& [x, y] : pts)
        o << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18.0 * static_cast<double>(si);
    o << "<line x1=\"" << fmt(kLeft + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(kLeft + pw + 32)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fmt(kLeft + pw + 38) << "\" y=\"" << fmt(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace spca
