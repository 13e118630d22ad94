#include "chaincount/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace chaincount {

std::vector<Detection> OracleCounter::count(const ImageRecord& crop) const {
  std::vector<Detection> out;
  out.reserve(crop.ground_truth.size());
  for (const auto& b : crop.ground_truth) out.push_back({b, 1.0});
  return out;
}

std::vector<IndexRange> cluster_by_gap(const std::vector<Point2D>& sorted_points, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("cluster_by_gap: delta must be > 0");
  std::vector<IndexRange> ranges;
  if (sorted_points.empty()) return ranges;
  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < sorted_points.size(); ++i) {
    const double gap = std::hypot(sorted_points[i + 1].x - sorted_points[i].x,
                                  sorted_points[i + 1].y - sorted_points[i].y);
    if (gap > delta) {
      ranges.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  ranges.push_back({begin, sorted_points.size()});
  return ranges;
}

std::vector<ClusterSlice> slice_image(const ImageRecord& record,
                                      const std::vector<Detection>& sorted_dets,
                                      const std::vector<IndexRange>& clusters, double padding) {
  if (padding < 0.0) throw std::invalid_argument("slice_image: padding must be >= 0");
  std::vector<ClusterSlice> slices;
  slices.reserve(clusters.size());
  for (const auto& range : clusters) {
    ClusterSlice slice;
    Rect r{record.width, record.height, 0.0, 0.0};
    for (std::size_t i = range.begin; i < range.end; ++i) {
      slice.member_indices.push_back(i);
      const BBox& b = sorted_dets[i].box;
      r.x0 = std::min(r.x0, b.cx - b.w / 2.0);
      r.y0 = std::min(r.y0, b.cy - b.h / 2.0);
      r.x1 = std::max(r.x1, b.cx + b.w / 2.0);
      r.y1 = std::max(r.y1, b.cy + b.h / 2.0);
    }
    r.x0 = std::max(0.0, r.x0 - padding);
    r.y0 = std::max(0.0, r.y0 - padding);
    r.x1 = std::min(record.width, r.x1 + padding);
    r.y1 = std::min(record.height, r.y1 + padding);
    slice.crop_region = r;
    slices.push_back(std::move(slice));
  }
  return slices;
}

ImageRecord restrict_to_crop(const ImageRecord& record, const Rect& crop) {
  ImageRecord sub;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s:%g,%g,%g,%g", record.id.c_str(), crop.x0, crop.y0, crop.x1,
                crop.y1);
  sub.id = buf;
  sub.width = crop.width();
  sub.height = crop.height();
  for (const auto& b : record.ground_truth) {
    if (crop.contains(b.center())) {
      sub.ground_truth.push_back({b.cx - crop.x0, b.cy - crop.y0, b.w, b.h});
    }
  }
  return sub;
}

std::vector<Detection> two_pass_count(const ImageRecord& record, const Counter& counter,
                                      const PartitionConfig& cfg,
                                      const DedupConfig& stitch_dedup) {
  const Rect full{0.0, 0.0, record.width, record.height};
  const std::vector<Detection> first_pass = counter.count(restrict_to_crop(record, full));

  std::vector<ClusterSlice> slices;
  Axis axis = Axis::X;
  if (first_pass.empty()) {
    ClusterSlice whole;
    whole.crop_region = full;
    slices.push_back(whole);
  } else {
    std::vector<Point2D> centers;
    centers.reserve(first_pass.size());
    for (const auto& d : first_pass) centers.push_back(d.box.center());
    axis = dominant_orientation(centers);
    const auto order = sort_along(centers, axis);

    std::vector<Detection> sorted_dets;
    std::vector<Point2D> sorted_centers;
    for (std::size_t idx : order) {
      sorted_dets.push_back(first_pass[idx]);
      sorted_centers.push_back(centers[idx]);
    }
    const auto clusters = cluster_by_gap(sorted_centers, cfg.gap_threshold);
    slices = slice_image(record, sorted_dets, clusters, cfg.padding);
  }

  std::vector<Detection> stitched;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const Rect& crop = slices[s].crop_region;
    std::vector<Detection> local;
    try {
      local = counter.count(restrict_to_crop(record, crop));
    } catch (const std::exception& e) {
      throw std::runtime_error("two_pass_count: counter failed on slice " + std::to_string(s) +
                               ": " + e.what());
    }
    for (Detection d : local) {
      d.box.cx += crop.x0;
      d.box.cy += crop.y0;
      stitched.push_back(d);
    }
  }

  return dedup(stitched, stitch_dedup, axis);
}

}  // namespace chaincount
