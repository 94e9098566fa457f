// Copyright 2026 The Emerge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emerge/svg.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace emerge {

namespace {

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

// Maps data coordinates onto the plot area.
struct Frame {
  double x0, x1, y0, y1;
  const PlotStyle& style;

  double px(double x) const {
    const double w = style.width - 2.0 * style.margin;
    return style.margin + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * w;
  }
  double py(double y) const {
    const double h = style.height - 2.0 * style.margin;
    return style.height - style.margin -
           (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * h;
  }
};

std::string header(const std::string& title, const std::string& comment,
                   const PlotStyle& style) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!comment.empty()) {
    std::string safe = comment;
    // "--" may not appear inside an XML comment.
    for (std::size_t p; (p = safe.find("--")) != std::string::npos;) {
      safe.replace(p, 2, "- -");
    }
    out += fmt::format("<!-- {} -->\n", safe);
  }
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      style.width, style.height);
  out += fmt::format("<title>{}</title>\n", escape(title));
  out += fmt::format(
      "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
      style.width, style.height);
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">"
      "{}</text>\n",
      style.margin, style.margin - 8, escape(title));
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"#999\" stroke-width=\"0.5\"/>\n",
      style.margin, style.margin, style.width - 2 * style.margin,
      style.height - 2 * style.margin);
  return out;
}

std::string polyline(const Frame& f, std::span<const double> ys,
                     const std::string& color, double width) {
  std::string pts;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (i) pts += ' ';
    pts += fmt::format("{:.2f},{:.2f}", f.px(static_cast<double>(i)),
                       f.py(ys[i]));
  }
  return fmt::format(
      "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
      "stroke-width=\"{}\"/>\n",
      pts, color, width);
}

}  // namespace

std::string signature_svg(const GroupSignature& sig, const std::string& title,
                          const std::string& comment, const PlotStyle& style) {
  const std::size_t n = sig.length;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, sig.mean_curve[i] - sig.std_curve[i]);
    hi = std::max(hi, sig.mean_curve[i] + sig.std_curve[i]);
  }
  Frame f{0.0, n > 1 ? static_cast<double>(n - 1) : 1.0, lo, hi, style};
  std::string out = header(title, comment, style);
  std::string band;
  for (std::size_t i = 0; i < n; ++i) {
    band += fmt::format("{:.2f},{:.2f} ", f.px(static_cast<double>(i)),
                        f.py(sig.mean_curve[i] + sig.std_curve[i]));
  }
  for (std::size_t i = n; i-- > 0;) {
    band += fmt::format("{:.2f},{:.2f} ", f.px(static_cast<double>(i)),
                        f.py(sig.mean_curve[i] - sig.std_curve[i]));
  }
  if (!band.empty()) band.pop_back();
  out += fmt::format(
      "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.45\" "
      "stroke=\"none\"/>\n",
      band, style.band_color);
  out += polyline(f, sig.mean_curve, style.line_color, 1.5);
  out += "</svg>\n";
  return out;
}

std::string burst_plot_svg(std::span<const double> series,
                           const BurstSet& bursts, const std::string& title,
                           const std::string& comment, const PlotStyle& style) {
  const auto ma = moving_average(series, std::max(bursts.window, 1));
  double hi = 0.0, lo = 0.0;
  for (double v : series) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  const std::size_t n = series.size();
  Frame f{0.0, n > 1 ? static_cast<double>(n - 1) : 1.0, lo, hi, style};
  std::string out = header(title, comment, style);
  for (const Burst& b : bursts.bursts) {
    const double x0 = f.px(static_cast<double>(b.start));
    const double x1 = f.px(static_cast<double>(b.end));
    out += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" "
        "fill=\"#f4a582\" fill-opacity=\"0.5\"/>\n",
        x0, style.margin, std::max(x1 - x0, 1.0),
        style.height - 2 * style.margin);
  }
  out += polyline(f, series, "#bbbbbb", 0.8);
  out += polyline(f, ma, style.line_color, 1.5);
  out += fmt::format(
      "<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" "
      "stroke=\"#b2182b\" stroke-dasharray=\"4 3\" stroke-width=\"0.8\"/>\n",
      style.margin, f.py(bursts.threshold), style.width - style.margin,
      f.py(bursts.threshold));
  out += "</svg>\n";
  return out;
}

}  // namespace emerge
