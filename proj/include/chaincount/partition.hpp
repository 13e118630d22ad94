#pragma once

#include <cstddef>
#include <vector>

#include "chaincount/geometry.hpp"
#include "chaincount/postprocess.hpp"

namespace chaincount {

struct PartitionConfig {
  double gap_threshold = 0.0;  // delta; must be set explicitly
  double padding = 0.0;
};

/// Axis-aligned rectangle in image coordinates, [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(const Point2D& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

/// Contiguous index range [begin, end) into a sorted detection list.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const IndexRange&) const = default;
};

struct ClusterSlice {
  std::vector<std::size_t> member_indices;
  Rect crop_region;
};

/// The counting capability the second pass needs. Receives an ImageRecord
/// restricted to a crop (crop-local coordinates, crop-sized width/height)
/// and returns detections in crop-local coordinates.
class Counter {
 public:
  virtual ~Counter() = default;
  virtual std::vector<Detection> count(const ImageRecord& crop) const = 0;
};

/// Returns the ground truth inside the crop, verbatim, with score 1.
/// Certifies the two-pass protocol in tests.
class OracleCounter : public Counter {
 public:
  std::vector<Detection> count(const ImageRecord& crop) const override;
};

/// Splits a sorted point sequence wherever the Euclidean distance between
/// consecutive points exceeds delta. Ranges partition the indices
/// contiguously and in order.
std::vector<IndexRange> cluster_by_gap(const std::vector<Point2D>& sorted_points, double delta);

/// Bounding rectangle of each cluster's member boxes, expanded by padding
/// and clipped to image bounds.
std::vector<ClusterSlice> slice_image(const ImageRecord& record,
                                      const std::vector<Detection>& sorted_dets,
                                      const std::vector<IndexRange>& clusters, double padding);

/// Restricts a record to a crop: dimensions become the crop size and the
/// ground truth inside the crop is translated to crop-local coordinates.
ImageRecord restrict_to_crop(const ImageRecord& record, const Rect& crop);

/// Two-pass divide-and-conquer counting: run the counter on the full
/// image, cluster the sorted first-pass detections by gap, re-count every
/// cluster crop, translate the per-crop detections back to global
/// coordinates, and dedup the stitched result at slice boundaries.
/// An empty first pass falls back to one slice covering the whole image.
/// Counter failures are rethrown naming the slice.
std::vector<Detection> two_pass_count(const ImageRecord& record, const Counter& counter,
                                      const PartitionConfig& cfg, const DedupConfig& stitch_dedup);

}  // namespace chaincount
