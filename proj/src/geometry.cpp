#include "chaincount/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace chaincount {

Axis dominant_orientation(const std::vector<Point2D>& points) {
  if (points.empty()) {
    throw std::invalid_argument("dominant_orientation: empty point set");
  }
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return (max_x - min_x) > (max_y - min_y) ? Axis::X : Axis::Y;
}

std::vector<std::size_t> sort_along(const std::vector<Point2D>& points, Axis axis) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = coord(points[a], axis);
    const double pb = coord(points[b], axis);
    if (pa != pb) return pa < pb;
    const Axis other = axis == Axis::X ? Axis::Y : Axis::X;
    return coord(points[a], other) < coord(points[b], other);
  });
  return order;
}

}  // namespace chaincount
