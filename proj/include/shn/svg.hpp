#pragma once

#include <string>
#include <utility>
#include <vector>

namespace shn::svg {

struct BoxGroup {
  std::string label;
  std::vector<double> values;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
  std::vector<double> error;                      // optional, one per point
};

/// Quartiles by linear interpolation; whiskers reach the furthest points within
/// 1.5 IQR, anything beyond is drawn as a dot.
std::string box_plot(const std::string& title, const std::string& y_label, const std::vector<BoxGroup>& groups);

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

/// `values` is rows x cols, row 0 drawn at the bottom. Optional overlay points are
/// given in the same fractional cell coordinates (0..cols, 0..rows).
std::string heatmap(const std::string& title, const std::vector<std::vector<double>>& values,
                    const std::vector<std::pair<double, double>>& overlay = {});

/// Linear-interpolated quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace shn::svg
