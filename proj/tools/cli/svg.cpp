#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stirap::cli {
namespace {

constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;  // legend lives on the right
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream os;
  if (std::abs(v) < 1e-12) v = 0.0;
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target_count - 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) ticks.push_back(v);
  return ticks;
}

std::string render_line_chart(const ChartSpec& spec, const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (spec.y_min) y_lo = *spec.y_min;
  if (spec.y_max) y_hi = *spec.y_max;
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  const double plot_w = kChartWidth - kLeft - kRight;
  const double plot_h = kChartHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kChartWidth << "\" height=\""
     << kChartHeight << "\" viewBox=\"0 0 " << kChartWidth << ' ' << kChartHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kChartWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
     << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(x_lo, x_hi)) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
       << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 20 << "\" text-anchor=\"middle\">"
       << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(y_lo, y_hi)) {
    const double y = py(t);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kChartHeight - 15
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(20," << kTop + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string style = "fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
                              (s.dashed ? " stroke-dasharray=\"6 4\"" : "");
    std::ostringstream pts;
    pts.precision(6);
    std::size_t count = 0;
    auto flush = [&] {
      if (count > 1) os << "<polyline " << style << " points=\"" << pts.str() << "\"/>\n";
      pts.str("");
      count = 0;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (!std::isfinite(y) || y < y_lo || y > y_hi) {
        flush();
        continue;
      }
      pts << (count ? " " : "") << px(s.x[i]) << ',' << py(y);
      ++count;
    }
    flush();

    const double ly = kTop + 15 + 20.0 * static_cast<double>(k);
    const double lx = kLeft + plot_w + 15;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly
       << "\" " << style << "/>\n";
    os << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stirap::cli
