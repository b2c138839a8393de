#pragma once

#include <string>
#include <vector>

namespace uavmag {

struct Series {
  std::string label;
  std::vector<double> values;
};

/// Vertically stacked time-series panels sharing the time axis (raw /
/// cleaned / truth layout). Long series are decimated to at most
/// `max_points` per panel by min/max pairs.
std::string svg_panels(const std::vector<Series>& panels, double sample_rate, const std::string& y_label,
                       std::size_t max_points = 2000);

/// One box (quartiles, median, 1.5 IQR whiskers) per group.
std::string svg_box_plot(const std::vector<Series>& groups, const std::string& y_label);

/// Lines over a shared x axis, with a legend.
std::string svg_line_plot(const std::vector<double>& x, const std::vector<Series>& lines, const std::string& x_label,
                          const std::string& y_label);

}  // namespace uavmag
