#pragma once

#include <string>
#include <utility>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/partition.hpp"

namespace diamond::svg {

// Two orthographic panels (northern hemisphere seen from +z, southern from
// -z) with every region outline and the points. Each region is one <path>
// carrying data-region; equatorial regions appear in both panels.
// Throws std::invalid_argument for an empty point set.
std::string render_partition(const partition::Partition& partition, const geometry::PointSet<double>& points);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> xy;
};

struct Guide {
  std::string label;
  double y = 0;
};

// Line plot of the series with horizontal guide lines. Throws
// std::invalid_argument when there is nothing to draw.
std::string render_scaling(const std::vector<Series>& series, const std::vector<Guide>& guides, const std::string& x_label,
                           const std::string& y_label);

}  // namespace diamond::svg
