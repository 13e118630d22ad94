#include "chaincount/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chaincount {

double Rng::gaussian(double mean, double sigma) {
  double u1 = uniform(0.0, 1.0);
  const double u2 = uniform(0.0, 1.0);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sigma * z;
}

namespace {

// In axis-local coordinates: "along" is the chain axis, "cross" the other.
Point2D to_xy(double along, double cross, Axis axis) {
  return axis == Axis::X ? Point2D{along, cross} : Point2D{cross, along};
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

ImageRecord generate_scene(const SceneSpec& spec) {
  if (spec.n_clusters < 1 || spec.handles_min < 1 || spec.handles_max < spec.handles_min) {
    throw std::invalid_argument("generate_scene: bad cluster/handle counts");
  }
  if (spec.spacing_mean <= 0.0 || spec.spacing_jitter < 0.0 ||
      spec.spacing_jitter >= spec.spacing_mean) {
    throw std::invalid_argument("generate_scene: bad spacing");
  }
  if (spec.inter_cluster_gap <= spec.spacing_mean + spec.spacing_jitter) {
    throw std::invalid_argument("generate_scene: inter_cluster_gap must exceed max spacing");
  }

  Rng rng(spec.seed);
  const double along_extent = spec.axis == Axis::X ? spec.width : spec.height;
  const double cross_extent = spec.axis == Axis::X ? spec.height : spec.width;
  const double margin =
      (spec.axis == Axis::X ? spec.handle_w : spec.handle_h) / 2.0 + spec.spacing_mean;

  ImageRecord rec;
  rec.id = "scene-" + std::to_string(spec.seed);
  rec.width = spec.width;
  rec.height = spec.height;

  double along = margin;
  const double cross = cross_extent / 2.0;
  for (int c = 0; c < spec.n_clusters; ++c) {
    if (c > 0) along += spec.inter_cluster_gap;
    const int handles = static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(spec.handles_min), static_cast<std::uint64_t>(spec.handles_max)));
    for (int i = 0; i < handles; ++i) {
      if (i > 0) {
        along += spec.spacing_mean + rng.uniform(-spec.spacing_jitter, spec.spacing_jitter);
      }
      const Point2D p = to_xy(along, cross, spec.axis);
      rec.ground_truth.push_back({p.x, p.y, spec.handle_w, spec.handle_h});
    }
  }

  const double needed = along + margin;
  if (needed > along_extent) {
    throw std::invalid_argument("generate_scene: layout needs " +
                                (spec.axis == Axis::X ? std::string("width") : std::string("height")) +
                                " >= " + std::to_string(needed));
  }
  return rec;
}

ImageRecord corrupt(const ImageRecord& record, const CorruptionSpec& spec) {
  if (record.ground_truth.empty()) {
    throw std::invalid_argument("corrupt: record has no ground truth");
  }
  Rng rng(spec.seed);
  ImageRecord out = record;
  out.predictions.clear();

  auto true_score = [&] {
    return clip01(rng.uniform(spec.score_model.true_mean - spec.score_model.true_spread,
                              spec.score_model.true_mean + spec.score_model.true_spread));
  };
  auto false_score = [&] {
    return clip01(rng.uniform(spec.score_model.false_mean - spec.score_model.false_spread,
                              spec.score_model.false_mean + spec.score_model.false_spread));
  };
  auto clamp_box = [&](BBox b) {
    b.cx = std::clamp(b.cx, 0.0, record.width);
    b.cy = std::clamp(b.cy, 0.0, record.height);
    return b;
  };

  for (const auto& gt : record.ground_truth) {
    if (!rng.bernoulli(spec.dropout_rate)) {
      BBox b = gt;
      b.cx += rng.gaussian(0.0, spec.center_jitter_sigma);
      b.cy += rng.gaussian(0.0, spec.center_jitter_sigma);
      out.predictions.push_back({clamp_box(b), true_score()});

      if (rng.bernoulli(spec.duplicate_rate)) {
        BBox dup = gt;
        dup.cx += rng.gaussian(0.0, spec.center_jitter_sigma + 0.5);
        dup.cy += rng.gaussian(0.0, spec.center_jitter_sigma + 0.5);
        out.predictions.push_back({clamp_box(dup), false_score()});
      }
    }
    if (rng.bernoulli(spec.false_positive_rate)) {
      BBox fpb{rng.uniform(0.0, record.width), rng.uniform(0.0, record.height), gt.w, gt.h};
      out.predictions.push_back({fpb, false_score()});
    }
  }
  return out;
}

std::vector<Detection> NoisyCounter::count(const ImageRecord& crop) const {
  if (crop.ground_truth.empty()) return {};
  CorruptionSpec local = spec_;
  local.seed = spec_.seed ^ fnv1a(crop.id);
  return corrupt(crop, local).predictions;
}

FileBackedCounter::FileBackedCounter(const std::vector<ImageRecord>& records) {
  for (const auto& r : records) by_id_[r.id] = r.predictions;
}

std::vector<Detection> FileBackedCounter::count(const ImageRecord& crop) const {
  const auto it = by_id_.find(crop.id);
  if (it == by_id_.end()) {
    throw std::runtime_error("FileBackedCounter: no detections for crop id '" + crop.id + "'");
  }
  return it->second;
}

}  // namespace chaincount
