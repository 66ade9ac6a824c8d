#include "strongbath/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace strongbath {

namespace {

constexpr int kWidth = 820;
constexpr int kPanelHeight = 300;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 24;
constexpr int kMarginBottom = 46;

const char* kPalette[] = {"#1f77b4", "#d62728", "#7f7f7f", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// round a raw interval to 1/2/5 x 10^k
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac < 1.5)
    step = 1.0;
  else if (frac < 3.5)
    step = 2.0;
  else if (frac < 7.5)
    step = 5.0;
  else
    step = 10.0;
  return step * mag;
}

}  // namespace

void emit_plot(const ResultTable& table, const std::string& x,
               const std::vector<std::vector<std::string>>& panels,
               const std::string& out_path, const std::vector<double>& vlines) {
  if (panels.empty()) throw ColumnMissing("plot needs at least one panel");
  const std::vector<double> xs = table.column_values(x);
  std::vector<std::vector<std::vector<double>>> ys(panels.size());
  for (std::size_t p = 0; p < panels.size(); ++p)
    for (const std::string& name : panels[p])
      ys[p].push_back(table.column_values(name));

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  for (double v : xs)
    if (std::isfinite(v)) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }

  const int height = kMarginTop + static_cast<int>(panels.size()) * kPanelHeight;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<!-- config " << std::hex << std::hash<std::string>{}(table.meta) << std::dec
      << " -->\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const int top = kMarginTop + static_cast<int>(p) * kPanelHeight;
    const int bottom = top + kPanelHeight - kMarginBottom;
    const int left = kMarginLeft;
    const int right = kWidth - kMarginRight;

    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& series : ys[p])
      for (double v : series)
        if (std::isfinite(v)) {
          ymin = std::min(ymin, v);
          ymax = std::max(ymax, v);
        }
    if (!(ymax > ymin)) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto px = [&](double v) {
      return left + (v - xmin) / (xmax - xmin) * (right - left);
    };
    const auto py = [&](double v) {
      return bottom - (v - ymin) / (ymax - ymin) * (bottom - top);
    };

    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
        << "\" height=\"" << bottom - top
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xmax - xmin);
    for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-9 * xstep;
         v += xstep) {
      svg << "<line x1=\"" << px(v) << "\" y1=\"" << bottom << "\" x2=\"" << px(v)
          << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << px(v) << "\" y=\"" << bottom + 18
          << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin);
    for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9 * ystep;
         v += ystep) {
      svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left
          << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4
          << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 34
        << "\" text-anchor=\"middle\">" << x << "</text>\n";

    for (double v : vlines) {
      if (v < xmin || v > xmax) continue;
      svg << "<line x1=\"" << px(v) << "\" y1=\"" << top << "\" x2=\"" << px(v)
          << "\" y2=\"" << bottom
          << "\" stroke=\"#555555\" stroke-dasharray=\"4,4\"/>\n";
    }

    for (std::size_t s = 0; s < ys[p].size(); ++s) {
      const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      bool in_gap = true;
      std::ostringstream pts;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double yv = ys[p][s][i];
        if (!std::isfinite(xs[i]) || !std::isfinite(yv)) {
          if (!in_gap) {
            // close the current polyline and open a fresh one
            svg << pts.str() << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            pts.str("");
          }
          in_gap = true;
          continue;
        }
        pts << fmt(px(xs[i])) << "," << fmt(py(yv)) << " ";
        in_gap = false;
      }
      svg << pts.str() << "\"/>\n";
      svg << "<text x=\"" << right - 8 << "\" y=\"" << top + 16 + 14 * s
          << "\" text-anchor=\"end\" fill=\"" << color << "\">" << panels[p][s]
          << "</text>\n";
    }
  }
  svg << "</svg>\n";

  std::ofstream out(out_path);
  if (!out) throw ConfigInvalid("cannot open plot output: " + out_path);
  out << svg.str();
}

}  // namespace strongbath
