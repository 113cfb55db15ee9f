#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polis/error.hpp"

namespace polis {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "year";
  std::string y_label;
  bool log_y = false;
  int width = 800;
  int height = 480;
};

struct RenderedPlot {
  std::string svg;
  std::vector<std::string> warnings;
};

namespace svg_detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
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

// Roughly `count` round tick values covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int count) {
  const double span = hi - lo;
  const double raw = span / std::max(1, count);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

}  // namespace svg_detail

// One polyline per series plus a legend. Output depends only on the inputs.
inline RenderedPlot render_line_plot(std::span<const PlotSeries> series, const PlotOptions& opts = {}) {
  using namespace svg_detail;
  if (series.empty()) throw DomainError("nothing to plot: empty series set");
  RenderedPlot out;
  std::vector<PlotSeries> data;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("series '" + s.name + "' has mismatched x/y lengths");
    if (s.x.size() < 2) throw DomainError("series '" + s.name + "' needs at least two points");
    PlotSeries kept{s.name, {}, {}};
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opts.log_y && !(s.y[i] > 0.0)) {
        ++dropped;
        continue;
      }
      kept.x.push_back(s.x[i]);
      kept.y.push_back(opts.log_y ? std::log10(s.y[i]) : s.y[i]);
    }
    if (dropped)
      out.warnings.push_back("series '" + s.name + "': " + std::to_string(dropped) +
                             " non-positive value(s) dropped from log plot");
    data.push_back(std::move(kept));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : data) {
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (!opts.log_y) ymin = std::min(ymin, 0.0);
  if (ymax == ymin) ymax = ymin + 1;
  if (opts.log_y) ymin = std::floor(ymin), ymax = std::ceil(ymax);
  if (ymax == ymin) ymax = ymin + 1;

  const double left = 80, right = 180, top = 40, bottom = 60;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::string& svg = out.svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" viewBox=\"0 0 " + std::to_string(opts.width) + ' ' +
         std::to_string(opts.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(opts.title) + "</text>\n";
  svg += "<g stroke=\"#444\" fill=\"none\"><line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" +
         num(left + pw) + "\" y2=\"" + num(top + ph) + "\"/><line x1=\"" + num(left) + "\" y1=\"" + num(top) +
         "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) + "\"/></g>\n";

  svg += "<g class=\"x-ticks\" text-anchor=\"middle\">\n";
  for (double t : nice_ticks(xmin, xmax, 8))
    svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
           num(top + ph + 5) + "\" stroke=\"#444\"/><text x=\"" + num(px(t)) + "\" y=\"" + num(top + ph + 18) +
           "\">" + label(t) + "</text>\n";
  svg += "</g>\n<g class=\"y-ticks\" text-anchor=\"end\">\n";
  std::vector<double> yt;
  if (opts.log_y) {
    for (double e = ymin; e <= ymax + 1e-9; e += 1) yt.push_back(e);
  } else {
    yt = nice_ticks(ymin, ymax, 6);
  }
  for (double t : yt) {
    const std::string text = opts.log_y ? "1e" + label(t) : label(t);
    svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(py(t)) + "\" stroke=\"#444\"/><text x=\"" + num(left - 8) + "\" y=\"" + num(py(t) + 4) + "\">" +
           text + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(opts.height - 15.0) + "\" text-anchor=\"middle\">" +
         escape(opts.x_label) + "</text>\n";
  svg += "<text transform=\"translate(18," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(opts.y_label + (opts.log_y ? " (log scale)" : "")) + "</text>\n";

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i];
    const char* color = kPalette[i % std::size(kPalette)];
    svg += "<polyline class=\"series\" fill=\"none\" stroke-width=\"2\" stroke=\"" + std::string(color) +
           "\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) svg += (k ? " " : "") + num(px(s.x[k])) + ',' + num(py(s.y[k]));
    svg += "\"/>\n";
  }

  svg += "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = top + 10 + 18.0 * static_cast<double>(i);
    const char* color = kPalette[i % std::size(kPalette)];
    svg += "<line x1=\"" + num(left + pw + 15) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left + pw + 35) + "\" y2=\"" +
           num(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/><text x=\"" + num(left + pw + 40) + "\" y=\"" +
           num(y + 4) + "\">" + escape(data[i].name) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return out;
}

}  // namespace polis
