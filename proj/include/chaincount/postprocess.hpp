#pragma once

#include <vector>

#include "chaincount/geometry.hpp"

namespace chaincount {

struct DedupConfig {
  double distance_threshold = 0.0;  // pixels; no sensible universal default, must be set
  double confidence_threshold = 0.26;
};

/// Keeps detections with score >= sigma (inclusive boundary), order preserved.
std::vector<Detection> filter_by_confidence(const std::vector<Detection>& dets, double sigma);

/// Duplicate removal along the given axis: sort by center coordinate,
/// sweep consecutive neighbors, and whenever two centers are closer than
/// distance_threshold along the sweep axis drop the lower-confidence one.
/// The sweep repeats until no pair violates the threshold; output comes
/// back sorted along the axis. Throws std::invalid_argument when
/// distance_threshold <= 0.
std::vector<Detection> dedup(const std::vector<Detection>& dets, const DedupConfig& cfg, Axis axis);

}  // namespace chaincount
