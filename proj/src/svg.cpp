#include "svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace fcas {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 420.0;
constexpr double kPad = 40.0;

}  // namespace

std::string comparison_svg(const std::vector<ComparisonPoint>& points) {
  double extent = 1.0;
  for (const auto& p : points) {
    extent = std::max({extent, p.dynamic_up_mw, p.dynamic_down_mw, p.static_up_mw,
                       p.static_down_mw, p.baseline_up_mw, p.baseline_down_mw});
  }
  extent *= 1.1;
  const double n = std::max<double>(1.0, static_cast<double>(points.size()) - 1.0);
  auto x = [&](std::size_t i) { return kPad + (kWidth - 2 * kPad) * static_cast<double>(i) / n; };
  auto y = [&](double v) { return kHeight / 2.0 - (kHeight / 2.0 - kPad) * v / extent; };

  auto polyline = [&](auto get, const char* colour, const char* dash) {
    std::string pts;
    for (std::size_t i = 0; i < points.size(); ++i) {
      pts += fmt::format("{:.1f},{:.1f} ", x(i), y(get(points[i])));
    }
    return fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" stroke-dasharray=\"{}\" "
        "points=\"{}\"/>\n",
        colour, dash, pts);
  };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#888\"/>\n", kPad,
                     kHeight / 2.0, kWidth - kPad);
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">+{:.0f} MW</text>\n", 2.0,
                     kPad - 4.0, extent);
  out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">-{:.0f} MW</text>\n", 2.0,
                     kHeight - kPad + 14.0, extent);
  out += polyline([](const ComparisonPoint& p) { return p.dynamic_up_mw; }, "#1f77b4", "none");
  out += polyline([](const ComparisonPoint& p) { return -p.dynamic_down_mw; }, "#1f77b4", "none");
  out += polyline([](const ComparisonPoint& p) { return p.static_up_mw; }, "#d62728", "6,3");
  out += polyline([](const ComparisonPoint& p) { return -p.static_down_mw; }, "#d62728", "6,3");
  out += polyline([](const ComparisonPoint& p) { return p.baseline_up_mw; }, "#2ca02c", "2,2");
  out += polyline([](const ComparisonPoint& p) { return -p.baseline_down_mw; }, "#2ca02c", "2,2");
  out += fmt::format(
      "<text x=\"{0}\" y=\"16\" font-size=\"12\" fill=\"#1f77b4\">dynamic</text>\n"
      "<text x=\"{1}\" y=\"16\" font-size=\"12\" fill=\"#d62728\">static</text>\n"
      "<text x=\"{2}\" y=\"16\" font-size=\"12\" fill=\"#2ca02c\">2% baseline</text>\n",
      kPad, kPad + 80.0, kPad + 150.0);
  out += "</svg>\n";
  return out;
}

}  // namespace fcas
