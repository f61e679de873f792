#pragma once

// Self-contained SVG line charts (fixed 800x500 viewport).

#include <optional>
#include <string>
#include <vector>

namespace stirap::cli {

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  bool dashed = false;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> y_min;
  std::optional<double> y_max;
};

inline constexpr int kChartWidth = 800;
inline constexpr int kChartHeight = 500;

/// "Nice" tick positions (1, 2, 5 x 10^k spacing) covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

/// Points outside the y range split the polyline instead of being clamped.
std::string render_line_chart(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace stirap::cli
