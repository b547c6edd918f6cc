/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef NAVLIM_SVG_HPP
#define NAVLIM_SVG_HPP

// Minimal hand-written SVG: line plots of SPEB tables and ellipse overlays.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "navlim/geom2d.hpp"
#include "navlim/simkit.hpp"

namespace navlim::svg {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

inline const char* color(std::size_t i) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  return kColors[i % 6];
}

/// Line plot with one polyline per mode; non-finite points are skipped.
inline std::string line_plot(const SpebTable& table, const std::string& x_label, const std::string& title) {
  constexpr double w = 640, h = 420, left = 70, right = 150, top = 40, bottom = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y1 = 0.0;
  for (const auto& r : table.rows) {
    x0 = std::min(x0, r.sweep_value);
    x1 = std::max(x1, r.sweep_value);
    if (std::isfinite(r.mean_speb)) y1 = std::max(y1, r.mean_speb);
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1 : 0;
    x1 = x0 + 2;
  }
  if (!(y1 > 0)) y1 = 1;
  const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  const auto py = [&](double y) { return h - bottom - y / y1 * (h - top - bottom); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + title + "</text>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(w - right) + "\" y2=\"" + num(py(0)) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top) +
       "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y1 * i / 4.0;
    const double x = x0 + (x1 - x0) * i / 4.0;
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         num(y) + "</text>\n";
    s += "<text x=\"" + num(px(x)) + "\" y=\"" + num(h - bottom + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         num(x) + "</text>\n";
  }
  s += "<text x=\"" + num((left + w - right) / 2) + "\" y=\"" + num(h - 12) + "\" text-anchor=\"middle\" font-size=\"13\">" +
       x_label + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((top + h - bottom) / 2) + "\" font-size=\"13\" transform=\"rotate(-90 16 " +
       num((top + h - bottom) / 2) + ")\" text-anchor=\"middle\">average SPEB (m^2)</text>\n";

  std::size_t series = 0;
  for (CoopMode m : all_modes()) {
    std::string pts;
    bool any = false;
    for (const auto& r : table.rows) {
      if (r.mode != m) continue;
      any = true;
      if (std::isfinite(r.mean_speb)) pts += num(px(r.sweep_value)) + "," + num(py(r.mean_speb)) + " ";
    }
    if (!any) continue;
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color(series)) + "\" stroke-width=\"2\" points=\"" + pts +
         "\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(series);
    s += "<line x1=\"" + num(w - right + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(w - right + 30) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + color(series) + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(w - right + 36) + "\" y=\"" + num(ly + 4) + "\" font-size=\"12\">" + to_string(m) +
         "</text>\n";
    ++series;
  }
  s += "</svg>\n";
  return s;
}

struct EllipseMark {
  Vec2 center;
  double semi_major = 0.0;  ///< drawing units (metres after scaling)
  double semi_minor = 0.0;
  Angle orientation;
  std::size_t group = 0;    ///< colour index
};

/// Node markers and ellipses over the deployment area (y up).
inline std::string ellipse_overlay(const std::vector<Vec2>& anchors, const std::vector<EllipseMark>& marks,
                                   double width, double height) {
  constexpr double px_per_m = 24.0, margin = 30.0;
  const auto sx = [&](double x) { return margin + x * px_per_m; };
  const auto sy = [&](double y) { return margin + (height - y) * px_per_m; };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(2 * margin + width * px_per_m) +
                  "\" height=\"" + num(2 * margin + height * px_per_m) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& a : anchors) {
    s += "<rect x=\"" + num(sx(a.x) - 4) + "\" y=\"" + num(sy(a.y) - 4) +
         "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
  }
  for (const auto& m : marks) {
    const double deg = -m.orientation.rad * 180.0 / std::numbers::pi;
    s += "<circle cx=\"" + num(sx(m.center.x)) + "\" cy=\"" + num(sy(m.center.y)) + "\" r=\"2\" fill=\"" +
         color(m.group) + "\"/>\n";
    s += "<ellipse cx=\"" + num(sx(m.center.x)) + "\" cy=\"" + num(sy(m.center.y)) + "\" rx=\"" +
         num(m.semi_major * px_per_m) + "\" ry=\"" + num(m.semi_minor * px_per_m) + "\" transform=\"rotate(" +
         num(deg) + " " + num(sx(m.center.x)) + " " + num(sy(m.center.y)) + ")\" fill=\"none\" stroke=\"" +
         color(m.group) + "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace navlim::svg

#endif  // NAVLIM_SVG_HPP
