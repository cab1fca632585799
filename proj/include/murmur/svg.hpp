#pragma once

// Self-contained SVG scatter plots with a fixed viewBox.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace murmur {

struct PlotSeries {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 1200;
  int height = 400;
  double radius = 2.0;
};

namespace detail {

inline std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
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

}  // namespace detail

inline std::string render_scatter_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  using detail::fixed2;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = -1, ymax = 1;
  if (xmin == xmax) xmin -= 0.5, xmax += 0.5;
  if (ymin == ymax) ymin -= 0.5, ymax += 0.5;
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;
  const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(spec.width) +
         " " + std::to_string(spec.height) + "\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed2(spec.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         detail::xml_escape(spec.title) + "</text>\n";
  // Frame and zero line.
  out += "<rect x=\"" + fixed2(left) + "\" y=\"" + fixed2(top) + "\" width=\"" + fixed2(pw) +
         "\" height=\"" + fixed2(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (ymin < 0 && ymax > 0)
    out += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(sy(0)) + "\" x2=\"" + fixed2(left + pw) +
           "\" y2=\"" + fixed2(sy(0)) + "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
    out += "<text x=\"" + fixed2(sx(xv)) + "\" y=\"" + fixed2(top + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + fixed2(xv) + "</text>\n";
    out += "<text x=\"" + fixed2(left - 6) + "\" y=\"" + fixed2(sy(yv) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fixed2(yv) + "</text>\n";
  }
  out += "<text x=\"" + fixed2(left + pw / 2) + "\" y=\"" + fixed2(spec.height - 8.0) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + detail::xml_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fixed2(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fixed2(top + ph / 2) + ")\">" + detail::xml_escape(spec.y_label) + "</text>\n";
  double legend_x = left + 10;
  for (const auto& s : series) {
    out += "<g fill=\"" + s.color + "\">\n";
    for (const auto& [x, y] : s.points)
      out += "<circle cx=\"" + fixed2(sx(x)) + "\" cy=\"" + fixed2(sy(y)) + "\" r=\"" + fixed2(spec.radius) + "\"/>\n";
    out += "</g>\n";
    out += "<circle cx=\"" + fixed2(legend_x) + "\" cy=\"" + fixed2(top + 12) + "\" r=\"5\" fill=\"" + s.color + "\"/>";
    out += "<text x=\"" + fixed2(legend_x + 10) + "\" y=\"" + fixed2(top + 16) + "\" font-size=\"12\">" +
           detail::xml_escape(s.name) + "</text>\n";
    legend_x += 20 + 8.0 * static_cast<double>(s.name.size());
  }
  out += "</svg>\n";
  return out;
}

}  // namespace murmur
