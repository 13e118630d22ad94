#include "chaincount/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaincount {

std::vector<Detection> filter_by_confidence(const std::vector<Detection>& dets, double sigma) {
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (const auto& d : dets) {
    if (d.score >= sigma) out.push_back(d);
  }
  return out;
}

std::vector<Detection> dedup(const std::vector<Detection>& dets, const DedupConfig& cfg, Axis axis) {
  if (cfg.distance_threshold <= 0.0) {
    throw std::invalid_argument("dedup: distance_threshold must be > 0");
  }

  std::vector<Point2D> centers;
  centers.reserve(dets.size());
  for (const auto& d : dets) centers.push_back(d.box.center());
  const auto order = sort_along(centers, axis);

  std::vector<Detection> sorted;
  sorted.reserve(dets.size());
  for (std::size_t idx : order) sorted.push_back(dets[idx]);

  // Sweep until no consecutive pair sits closer than the threshold along
  // the axis (cascaded removals need the extra passes).
  bool changed = true;
  while (changed && sorted.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i + 1 < sorted.size();) {
      const double gap = std::abs(coord(sorted[i + 1].box.center(), axis) -
                                  coord(sorted[i].box.center(), axis));
      if (gap < cfg.distance_threshold) {
        // Keep the higher confidence; on a tie keep the earlier one.
        sorted.erase(sorted.begin() +
                     static_cast<std::ptrdiff_t>(sorted[i + 1].score > sorted[i].score ? i : i + 1));
        changed = true;
      } else {
        ++i;
      }
    }
  }
  return sorted;
}

}  // namespace chaincount
