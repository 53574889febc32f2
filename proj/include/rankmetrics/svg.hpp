#pragma once

#include <span>
#include <string>
#include <vector>

#include "rankmetrics/complementarity.hpp"

namespace rankmetrics {

struct ScatterPoint {
  std::string id;
  MetricKind kind = MetricKind::Automatic;
  double x = 0.0;
  double y = 0.0;
  std::size_t cluster = 0;
};

// `metadata` lands in a <metadata> element verbatim (XML-escaped).
std::string heatmap_svg(const ComplementarityMatrix& matrix, const std::string& metadata);

// Human metrics are drawn as squares, automatic ones as circles; fill colour
// encodes the cluster.
std::string scatter_svg(std::span<const ScatterPoint> points, const std::string& title, const std::string& metadata);

std::string xml_escape(std::string_view text);

// Fixed-point formatting for coordinates; locale-independent.
std::string format_fixed(double value, int digits);

}  // namespace rankmetrics
