#pragma once

#include <string>
#include <vector>

namespace fcas {

struct ComparisonPoint {
  int cluster = 0;
  double dynamic_up_mw = 0.0;
  double dynamic_down_mw = 0.0;
  double static_up_mw = 0.0;
  double static_down_mw = 0.0;
  double baseline_up_mw = 0.0;
  double baseline_down_mw = 0.0;
};

// Line chart of upward (positive) and downward (negative) requirements per
// cluster for the dynamic, static and 2% baseline methods.
std::string comparison_svg(const std::vector<ComparisonPoint>& points);

}  // namespace fcas
