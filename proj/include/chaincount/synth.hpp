#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "chaincount/geometry.hpp"
#include "chaincount/partition.hpp"

namespace chaincount {

/// splitmix64: the pinned pseudo-random generator for every synthetic
/// draw, so traces reproduce bit-for-bit across platforms.
/// Constants: increment 0x9E3779B97F4A7C15, mix multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [lo, hi) from the top 53 bits.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  /// Integer in [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_u64() % (hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

  /// Box-Muller, cosine branch only (one normal per two uniforms).
  double gaussian(double mean, double sigma);

 private:
  std::uint64_t state_;
};

struct SceneSpec {
  double width = 1280.0;
  double height = 720.0;
  int n_clusters = 1;
  int handles_min = 8;
  int handles_max = 12;
  double spacing_mean = 30.0;
  double spacing_jitter = 4.0;
  double inter_cluster_gap = 200.0;
  Axis axis = Axis::X;
  double handle_w = 18.0;
  double handle_h = 40.0;
  std::uint64_t seed = 0;
};

/// Score draws for corrupted predictions: truthful detections sample
/// uniform around true_mean, spurious ones around false_mean, clipped to
/// [0,1].
struct ScoreModel {
  double true_mean = 0.85;
  double true_spread = 0.1;
  double false_mean = 0.15;
  double false_spread = 0.1;
};

struct CorruptionSpec {
  double center_jitter_sigma = 1.0;
  double dropout_rate = 0.0;
  double duplicate_rate = 0.0;
  double false_positive_rate = 0.0;
  ScoreModel score_model;
  std::uint64_t seed = 0;
};

/// Deterministic chain layout: n_clusters chains along the axis with the
/// given spacing and gap, centered on the cross axis. Only ground truth
/// is filled. Throws when the layout cannot fit, naming the required
/// minimum dimensions.
ImageRecord generate_scene(const SceneSpec& spec);

/// Fills predictions from ground truth with jitter, dropouts,
/// near-duplicates and false positives. Deterministic per seed.
ImageRecord corrupt(const ImageRecord& record, const CorruptionSpec& spec);

/// Counter that corrupts the crop's ground truth before returning it; the
/// seed is mixed with a hash of the crop id so distinct crops draw
/// independent noise.
class NoisyCounter : public Counter {
 public:
  explicit NoisyCounter(CorruptionSpec spec) : spec_(spec) {}
  std::vector<Detection> count(const ImageRecord& crop) const override;

 private:
  CorruptionSpec spec_;
};

/// Counter backed by precomputed detections keyed by crop id (the id
/// restrict_to_crop assigns). Missing keys throw.
class FileBackedCounter : public Counter {
 public:
  explicit FileBackedCounter(const std::vector<ImageRecord>& records);
  std::vector<Detection> count(const ImageRecord& crop) const override;

 private:
  std::unordered_map<std::string, std::vector<Detection>> by_id_;
};

}  // namespace chaincount
