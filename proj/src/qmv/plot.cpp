// Copyright 2026 The qmlverify Authors
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

#include "qmv/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"

namespace qmv::plot {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b"};

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double cell_number(const CsvTable& t, std::size_t row, int col) {
  double v = 0.0;
  if (!io::parse_double(t.rows[row][static_cast<std::size_t>(col)], v)) {
    throw ValidationError("plot: non-numeric cell in column '" +
                          t.header[static_cast<std::size_t>(col)] + "'");
  }
  return v;
}

std::vector<Series> collect(const CsvTable& t, const AxesSpec& axes) {
  const int xc = t.column(axes.xColumn);
  if (xc < 0) throw ValidationError("plot: unknown x column '" + axes.xColumn + "'");
  const int gc = axes.groupColumn.empty() ? -1 : t.column(axes.groupColumn);
  if (!axes.groupColumn.empty() && gc < 0) {
    throw ValidationError("plot: unknown group column '" + axes.groupColumn + "'");
  }
  std::vector<Series> out;
  for (const auto& yname : axes.yColumns) {
    const int yc = t.column(yname);
    if (yc < 0) throw ValidationError("plot: unknown y column '" + yname + "'");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::string name = yname;
      if (gc >= 0) name = t.rows[r][static_cast<std::size_t>(gc)] + " " + yname;
      auto it = std::find_if(out.begin(), out.end(), [&](const Series& s) { return s.name == name; });
      if (it == out.end()) {
        out.push_back({name, {}, {}});
        it = out.end() - 1;
      }
      it->x.push_back(cell_number(t, r, xc));
      it->y.push_back(cell_number(t, r, yc));
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const CsvTable& table, const AxesSpec& axes) {
  if (table.rows.empty()) throw ValidationError("plot: no rows to plot");
  if (axes.yColumns.empty()) throw ValidationError("plot: no y columns selected");
  const auto series = collect(table, axes);

  auto tx = [&](double x) { return axes.logX ? std::log10(x) : x; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (axes.logX && !(s.x[i] > 0.0)) throw ValidationError("plot: log x axis needs x > 0");
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (axes.identityLine) {
    const double lo = std::min(xmin, ymin), hi = std::max(xmax, ymax);
    xmin = ymin = lo;
    xmax = ymax = hi;
  }
  auto widen = [](double& lo, double& hi) {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  };
  widen(xmin, xmax);
  widen(ymin, ymax);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto pxt = [&](double t) { return kLeft + (t - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) +
         "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(axes.title) + "</text>\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double t = xmin + (xmax - xmin) * k / 4.0;
    const double label = axes.logX ? std::pow(10.0, t) : t;
    svg += "<text x=\"" + fmt(pxt(t)) + "\" y=\"" + fmt(kTop + ph + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           io::format_g(label, 3) + "</text>\n";
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           io::format_g(yv, 3) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(axes.xLabel.empty() ? axes.xColumn : axes.xLabel) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" transform=\"rotate(-90 16 " +
         fmt(kTop + ph / 2) +
         ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(axes.yLabel) + "</text>\n";

  if (axes.identityLine) {
    svg += "<line x1=\"" + fmt(pxt(xmin)) + "\" y1=\"" + fmt(py(xmin)) + "\" x2=\"" +
           fmt(pxt(xmax)) + "\" y2=\"" + fmt(py(xmax)) +
           "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    const auto& ser = series[s];
    if (ser.x.size() > 1) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"";
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (i) svg += ' ';
        svg += fmt(px(ser.x[i])) + "," + fmt(py(ser.y[i]));
      }
      svg += "\"/>\n";
    }
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      svg += "<circle cx=\"" + fmt(px(ser.x[i])) + "\" cy=\"" + fmt(py(ser.y[i])) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    const double ly = kTop + 16 + 16 * static_cast<double>(s);
    svg += "<text x=\"" + fmt(kLeft + 10) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
           escape(ser.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const CsvTable& table, const AxesSpec& axes, const std::filesystem::path& path) {
  io::write_file_atomic(path, render_svg(table, axes));
}

}  // namespace qmv::plot
