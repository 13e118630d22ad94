#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace chaincount {

/// Continuous image coordinates, origin at the top-left corner.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2D&) const = default;
};

/// Axis-aligned box stored as center + size. All formulas here consume
/// centers; corner form only exists at the I/O boundary.
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  Point2D center() const { return {cx, cy}; }

  bool operator==(const BBox&) const = default;
};

/// A predicted instrument handle: box plus confidence in [0,1].
struct Detection {
  BBox box;
  double score = 0.0;

  bool operator==(const Detection&) const = default;
};

/// One image's predictions and annotations; the unit of evaluation.
/// No pixel data, only geometry.
struct ImageRecord {
  std::string id;
  double width = 0.0;
  double height = 0.0;
  std::vector<Detection> predictions;
  std::vector<BBox> ground_truth;

  bool operator==(const ImageRecord&) const = default;
};

enum class Axis { X, Y };

/// Dominant orientation of a point set: X iff the x-spread strictly
/// exceeds the y-spread. A tie resolves to Y (the comparison is strict).
/// Throws std::invalid_argument on empty input.
Axis dominant_orientation(const std::vector<Point2D>& points);

/// Stable ascending sort along the chosen axis. Ties break on the other
/// coordinate, then on original index. Returns the permutation of indices.
std::vector<std::size_t> sort_along(const std::vector<Point2D>& points, Axis axis);

inline double coord(const Point2D& p, Axis axis) { return axis == Axis::X ? p.x : p.y; }

}  // namespace chaincount
