#include "rankmetrics/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rankmetrics/error.hpp"

namespace rankmetrics {

namespace {

constexpr double kCell = 28.0;
constexpr double kLabelSpace = 130.0;

std::string hex_color(int r, int g, int b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "#";
  for (int c : {r, g, b}) {
    c = std::clamp(c, 0, 255);
    out.push_back(kDigits[c / 16]);
    out.push_back(kDigits[c % 16]);
  }
  return out;
}

// 0 -> pale, 1 -> dark blue.
std::string ramp(double v) {
  v = std::clamp(v, 0.0, 1.0);
  auto lerp = [&](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * v)); };
  return hex_color(lerp(247, 8), lerp(251, 48), lerp(255, 107));
}

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_fixed(double value, int digits) {
  if (std::abs(value) < 0.5 * std::pow(10.0, -digits)) value = 0.0;  // no "-0.00"
  std::array<char, 64> buffer{};
  auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::fixed, digits);
  if (ec != std::errc()) throw Error(ErrorCode::NumericalFailure, "cannot format number");
  return std::string(buffer.data(), end);
}

std::string heatmap_svg(const ComplementarityMatrix& matrix, const std::string& metadata) {
  const std::size_t m = matrix.size();
  const double side = kLabelSpace + kCell * static_cast<double>(m) + 20.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << format_fixed(side, 1) << ' '
      << format_fixed(side, 1) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<metadata>" << xml_escape(metadata) << "</metadata>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << format_fixed(side, 1) << "\" height=\"" << format_fixed(side, 1)
      << "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < m; ++i) {
    const double pos = kLabelSpace + kCell * static_cast<double>(i);
    out << "<text x=\"" << format_fixed(kLabelSpace - 4.0, 1) << "\" y=\"" << format_fixed(pos + kCell * 0.65, 1)
        << "\" text-anchor=\"end\">" << xml_escape(matrix.metric_ids[i]) << "</text>\n";
    out << "<text transform=\"translate(" << format_fixed(pos + kCell * 0.65, 1) << ' '
        << format_fixed(kLabelSpace - 4.0, 1) << ") rotate(-90)\">" << xml_escape(matrix.metric_ids[i])
        << "</text>\n";
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = matrix(i, j);
      out << "<rect x=\"" << format_fixed(kLabelSpace + kCell * static_cast<double>(j), 1) << "\" y=\""
          << format_fixed(kLabelSpace + kCell * static_cast<double>(i), 1) << "\" width=\"" << format_fixed(kCell, 1)
          << "\" height=\"" << format_fixed(kCell, 1) << "\" fill=\"" << ramp(v) << "\"><title>"
          << xml_escape(matrix.metric_ids[i]) << " / " << xml_escape(matrix.metric_ids[j]) << ": "
          << format_fixed(v, 4) << "</title></rect>\n";
    }
  }
  const auto humans = static_cast<std::size_t>(std::count(matrix.kinds.begin(), matrix.kinds.end(), MetricKind::Human));
  if (humans > 0 && humans < m) {
    const double at = kLabelSpace + kCell * static_cast<double>(humans);
    const double lo = kLabelSpace;
    const double hi = kLabelSpace + kCell * static_cast<double>(m);
    out << "<line x1=\"" << format_fixed(at, 1) << "\" y1=\"" << format_fixed(lo, 1) << "\" x2=\""
        << format_fixed(at, 1) << "\" y2=\"" << format_fixed(hi, 1) << "\" stroke=\"#ff0000\" stroke-width=\"2\"/>\n";
    out << "<line x1=\"" << format_fixed(lo, 1) << "\" y1=\"" << format_fixed(at, 1) << "\" x2=\""
        << format_fixed(hi, 1) << "\" y2=\"" << format_fixed(at, 1) << "\" stroke=\"#ff0000\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string scatter_svg(std::span<const ScatterPoint> points, const std::string& title, const std::string& metadata) {
  constexpr double kWidth = 480.0;
  constexpr double kHeight = 400.0;
  constexpr double kMargin = 50.0;
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  if (!points.empty()) {
    min_x = max_x = points.front().x;
    min_y = max_y = points.front().y;
  }
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double span_x = max_x > min_x ? max_x - min_x : 1.0;
  const double span_y = max_y > min_y ? max_y - min_y : 1.0;
  auto sx = [&](double x) { return kMargin + (x - min_x) / span_x * (kWidth - 2 * kMargin); };
  auto sy = [&](double y) { return kHeight - kMargin - (y - min_y) / span_y * (kHeight - 2 * kMargin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << format_fixed(kWidth, 1) << ' '
      << format_fixed(kHeight, 1) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<metadata>" << xml_escape(metadata) << "</metadata>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << format_fixed(kWidth, 1) << "\" height=\"" << format_fixed(kHeight, 1)
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << format_fixed(kWidth / 2, 1) << "\" y=\"20.0\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n";
  out << "<line x1=\"" << format_fixed(kMargin, 1) << "\" y1=\"" << format_fixed(kHeight - kMargin, 1) << "\" x2=\""
      << format_fixed(kWidth - kMargin, 1) << "\" y2=\"" << format_fixed(kHeight - kMargin, 1)
      << "\" stroke=\"#444444\"/>\n";
  out << "<line x1=\"" << format_fixed(kMargin, 1) << "\" y1=\"" << format_fixed(kMargin, 1) << "\" x2=\""
      << format_fixed(kMargin, 1) << "\" y2=\"" << format_fixed(kHeight - kMargin, 1) << "\" stroke=\"#444444\"/>\n";
  out << "<text x=\"" << format_fixed(kWidth / 2, 1) << "\" y=\"" << format_fixed(kHeight - 15.0, 1)
      << "\" text-anchor=\"middle\">PC1</text>\n";
  out << "<text transform=\"translate(15.0 " << format_fixed(kHeight / 2, 1) << ") rotate(-90)\">PC2</text>\n";
  for (const auto& p : points) {
    const std::string color = kPalette[p.cluster % kPalette.size()];
    const double x = sx(p.x);
    const double y = sy(p.y);
    if (p.kind == MetricKind::Human) {
      out << "<rect x=\"" << format_fixed(x - 5.0, 2) << "\" y=\"" << format_fixed(y - 5.0, 2)
          << "\" width=\"10.0\" height=\"10.0\" fill=\"" << color << "\" stroke=\"#000000\"/>\n";
    } else {
      out << "<circle cx=\"" << format_fixed(x, 2) << "\" cy=\"" << format_fixed(y, 2) << "\" r=\"5.0\" fill=\""
          << color << "\"/>\n";
    }
    out << "<text x=\"" << format_fixed(x + 7.0, 2) << "\" y=\"" << format_fixed(y + 3.0, 2) << "\">"
        << xml_escape(p.id) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rankmetrics
