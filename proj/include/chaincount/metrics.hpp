#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaincount/geometry.hpp"

namespace chaincount {

struct CountStats {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n_images = 0;
};

/// GAME score per grid level L (2^L x 2^L cells), averaged over images.
struct GameStats {
  std::map<int, double> per_level;
};

struct LocalizationReport {
  double mean_l2 = 0.0;         // mean over images of per-image mean matched distance
  double mean_median_l2 = 0.0;  // mean over images of per-image median
  double mean_p95_l2 = 0.0;     // mean over images of per-image 95th percentile
  double precision = 0.0;       // micro-averaged (pooled TP/FP/FN)
  double recall = 0.0;
  double f1 = 0.0;
  double macro_precision = 0.0;  // mean of per-image values, for transparency
  double macro_recall = 0.0;
  double mean_iou_matched = 0.0;
  std::size_t images_with_matches = 0;
};

struct MetricsReport {
  CountStats counts;
  GameStats game;
  std::optional<LocalizationReport> localization;  // absent when no record carries annotations
};

/// MAE and RMSE over per-image prediction / ground-truth counts.
/// Throws std::invalid_argument on an empty dataset.
CountStats count_stats(const std::vector<ImageRecord>& records);

/// Counting error over a 2^L x 2^L grid: sum over cells of
/// |#pred centers - #gt centers|. Cells are half-open; a center on a
/// boundary belongs to the higher-index cell, and the far image edge is
/// closed.
double game(const ImageRecord& record, int level);

/// The filtering-then-matching localization procedure: predictions whose
/// center lies inside at least one gt box (closed boxes) are matched
/// one-to-one to gt centers under L2 cost; matched distances feed the
/// per-image mean/median/p95, and TP = #matched, FP = #preds - TP,
/// FN = #gt - TP feed pooled precision/recall/F1.
LocalizationReport localization_report(const std::vector<ImageRecord>& records);

/// Intersection over union of two boxes.
double iou(const BBox& a, const BBox& b);

/// Linear-interpolation percentile (same convention as numpy.percentile
/// default): on sorted values, rank = q/100 * (n-1), interpolated between
/// the two nearest order statistics. Throws on empty input.
double percentile(std::vector<double> values, double q);

MetricsReport evaluate(const std::vector<ImageRecord>& records, const std::vector<int>& game_levels);

/// Fixed 4-decimal text rendering, stable across runs; the golden-file
/// format.
std::string render_report(const MetricsReport& report);

}  // namespace chaincount
