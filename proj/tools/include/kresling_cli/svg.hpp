#pragma once

#include <string>
#include <vector>

#include "kresling/geometry.hpp"

namespace kresling::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

struct HeatCell {
  double x = 0;
  double y = 0;
  /// Value drawn in colour; cells without one are grey and carry `tag`.
  bool has_value = false;
  double value = 0;
  std::string tag;
};

std::string heatmap(const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<HeatCell>& cells,
                    double cell_size);

/// Flat crease pattern, 1 user unit = 1 mm. Mountain creases solid red,
/// valley creases dashed blue, polygon edges black.
std::string crease_pattern_svg(const CreasePattern& pattern);

}  // namespace kresling::cli
