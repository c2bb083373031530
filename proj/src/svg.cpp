#include "shn/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace shn::svg {

namespace {

constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
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

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) +
         "</text>\n";
}

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const { return hi == lo ? (a + b) / 2 : a + (v - lo) / (hi - lo) * (b - a); }
};

Axis padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0, 1};
  if (hi == lo) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string y_axis(const Axis& y, const std::string& label) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kH - kBottom) +
       "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y.lo + (y.hi - y.lo) * t / 4.0;
    const double py = y.map(v, kH - kBottom, kTop);
    s += "<line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(py) +
         "\" stroke=\"black\"/><text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
         num(v) + "</text>\n";
  }
  s += "<text transform=\"translate(16," + num((kTop + kH - kBottom) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(label) + "</text>\n";
  return s;
}

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string box_plot(const std::string& title, const std::string& y_label, const std::vector<BoxGroup>& groups) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& g : groups) {
    for (double v : g.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const Axis y = padded(lo, hi);
  std::string s = header(title) + y_axis(y, y_label);
  const double slot = (kW - kLeft - kRight) / std::max<double>(1.0, static_cast<double>(groups.size()));
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const double cx = kLeft + slot * (static_cast<double>(k) + 0.5);
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(kH - kBottom + 16) + "\" text-anchor=\"middle\" font-size=\"10\">" +
         escape(groups[k].label) + "</text>\n";
    if (groups[k].values.empty()) continue;
    auto v = groups[k].values;
    std::sort(v.begin(), v.end());
    const double q1 = quantile_sorted(v, 0.25), med = quantile_sorted(v, 0.5), q3 = quantile_sorted(v, 0.75);
    const double iqr = q3 - q1;
    double wlo = q1, whi = q3;
    for (double x : v) {
      if (x >= q1 - 1.5 * iqr) wlo = std::min(wlo, x);
      if (x <= q3 + 1.5 * iqr) whi = std::max(whi, x);
    }
    const double half = std::min(18.0, slot * 0.3);
    auto py = [&](double val) { return num(y.map(val, kH - kBottom, kTop)); };
    s += "<line x1=\"" + num(cx) + "\" y1=\"" + py(wlo) + "\" x2=\"" + num(cx) + "\" y2=\"" + py(whi) +
         "\" stroke=\"black\"/>\n";
    s += "<rect x=\"" + num(cx - half) + "\" y=\"" + py(q3) + "\" width=\"" + num(2 * half) + "\" height=\"" +
         num(std::max(0.5, y.map(q1, kH - kBottom, kTop) - y.map(q3, kH - kBottom, kTop))) +
         "\" fill=\"#cfe0f3\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(cx - half) + "\" y1=\"" + py(med) + "\" x2=\"" + num(cx + half) + "\" y2=\"" + py(med) +
         "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    for (double x : v) {
      if (x < wlo || x > whi) s += "<circle cx=\"" + num(cx) + "\" cy=\"" + py(x) + "\" r=\"2\" fill=\"black\"/>\n";
    }
  }
  return s + "</svg>\n";
}

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = 0.0, yhi = 1.0;
  for (const auto& sr : series) {
    for (std::size_t k = 0; k < sr.points.size(); ++k) {
      const double e = k < sr.error.size() ? sr.error[k] : 0.0;
      xlo = std::min(xlo, sr.points[k].first);
      xhi = std::max(xhi, sr.points[k].first);
      ylo = std::min(ylo, sr.points[k].second - e);
      yhi = std::max(yhi, sr.points[k].second + e);
    }
  }
  const Axis x = padded(xlo, xhi), y = padded(ylo, yhi);
  std::string s = header(title) + y_axis(y, y_label);
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kH - kBottom) + "\" x2=\"" + num(kW - kRight) + "\" y2=\"" +
       num(kH - kBottom) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = x.lo + (x.hi - x.lo) * t / 4.0;
    s += "<text x=\"" + num(x.map(v, kLeft, kW - kRight)) + "\" y=\"" + num(kH - kBottom + 16) +
         "\" text-anchor=\"middle\">" + num(v) + "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kW - kRight) / 2) + "\" y=\"" + num(kH - 20) + "\" text-anchor=\"middle\">" +
       escape(x_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % kPalette.size()];
    const auto& sr = series[k];
    std::string pts;
    for (std::size_t p = 0; p < sr.points.size(); ++p) {
      const double px = x.map(sr.points[p].first, kLeft, kW - kRight);
      const double py = y.map(sr.points[p].second, kH - kBottom, kTop);
      pts += num(px) + "," + num(py) + " ";
      s += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"3\" fill=\"" + colour + "\"/>\n";
      if (p < sr.error.size() && sr.error[p] > 0) {
        s += "<line x1=\"" + num(px) + "\" y1=\"" + num(y.map(sr.points[p].second - sr.error[p], kH - kBottom, kTop)) +
             "\" x2=\"" + num(px) + "\" y2=\"" + num(y.map(sr.points[p].second + sr.error[p], kH - kBottom, kTop)) +
             "\" stroke=\"" + colour + "\"/>\n";
      }
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colour + "\"/>\n";
    s += "<text x=\"" + num(kW - kRight - 150) + "\" y=\"" + num(kTop + 14.0 * static_cast<double>(k + 1)) +
         "\" fill=\"" + colour + "\">" + escape(sr.name) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string heatmap(const std::string& title, const std::vector<std::vector<double>>& values,
                    const std::vector<std::pair<double, double>>& overlay) {
  std::string s = header(title);
  if (values.empty() || values.front().empty()) return s + "</svg>\n";
  const std::size_t rows = values.size(), cols = values.front().size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : values) {
    for (double v : r) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double side = std::min(kW - kLeft - kRight - 80, kH - kTop - kBottom);
  const double cw = side / static_cast<double>(cols), ch = side / static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double t = hi == lo ? 0.5 : (values[r][c] - lo) / (hi - lo);
      // dark blue (low energy) to yellow (high)
      const int red = static_cast<int>(std::lround(30 + 220 * t));
      const int green = static_cast<int>(std::lround(40 + 190 * t));
      const int blue = static_cast<int>(std::lround(120 - 90 * t));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", red, green, blue);
      s += "<rect x=\"" + num(kLeft + cw * static_cast<double>(c)) + "\" y=\"" +
           num(kTop + side - ch * static_cast<double>(r + 1)) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
           "\" fill=\"" + fill + "\"/>\n";
    }
  }
  for (const auto& [px, py] : overlay) {
    s += "<circle cx=\"" + num(kLeft + cw * px) + "\" cy=\"" + num(kTop + side - ch * py) +
         "\" r=\"4\" fill=\"none\" stroke=\"white\" stroke-width=\"2\"/>\n";
  }
  s += "<text x=\"" + num(kLeft + side + 10) + "\" y=\"" + num(kTop + 12) + "\">max " + num(hi) + "</text>\n";
  s += "<text x=\"" + num(kLeft + side + 10) + "\" y=\"" + num(kTop + side) + "\">min " + num(lo) + "</text>\n";
  return s + "</svg>\n";
}

}  // namespace shn::svg
