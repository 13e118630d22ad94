#include "chaincount/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "chaincount/assignment.hpp"

namespace chaincount {

CountStats count_stats(const std::vector<ImageRecord>& records) {
  if (records.empty()) throw std::invalid_argument("count_stats: empty dataset");
  CountStats s;
  s.n_images = records.size();
  double sq = 0.0;
  for (const auto& r : records) {
    const double diff = static_cast<double>(r.predictions.size()) -
                        static_cast<double>(r.ground_truth.size());
    s.mae += std::abs(diff);
    sq += diff * diff;
  }
  s.mae /= static_cast<double>(records.size());
  s.rmse = std::sqrt(sq / static_cast<double>(records.size()));
  return s;
}

double game(const ImageRecord& record, int level) {
  if (level < 0) throw std::invalid_argument("game: level must be >= 0");
  const int cells = 1 << level;
  const double cell_w = record.width / cells;
  const double cell_h = record.height / cells;

  auto cell_of = [&](const Point2D& p) {
    const int cx = std::min(static_cast<int>(std::floor(p.x / cell_w)), cells - 1);
    const int cy = std::min(static_cast<int>(std::floor(p.y / cell_h)), cells - 1);
    return cy * cells + cx;
  };

  std::vector<int> diff(static_cast<std::size_t>(cells) * cells, 0);
  for (const auto& d : record.predictions) diff[cell_of(d.box.center())] += 1;
  for (const auto& g : record.ground_truth) diff[cell_of(g.center())] -= 1;

  double sum = 0.0;
  for (int v : diff) sum += std::abs(v);
  return sum;
}

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.cx + a.w / 2, b.cx + b.w / 2) -
                                      std::max(a.cx - a.w / 2, b.cx - b.w / 2));
  const double iy = std::max(0.0, std::min(a.cy + a.h / 2, b.cy + b.h / 2) -
                                      std::max(a.cy - a.h / 2, b.cy - b.h / 2));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (q < 0.0 || q > 100.0) throw std::invalid_argument("percentile: q outside [0,100]");
  std::sort(values.begin(), values.end());
  const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

LocalizationReport localization_report(const std::vector<ImageRecord>& records) {
  LocalizationReport rep;
  double tp = 0.0, fp = 0.0, fn = 0.0;
  double sum_mean = 0.0, sum_median = 0.0, sum_p95 = 0.0;
  double iou_sum = 0.0;
  std::size_t iou_pairs = 0;
  double macro_p_sum = 0.0, macro_r_sum = 0.0;
  std::size_t macro_p_n = 0, macro_r_n = 0;

  for (const auto& rec : records) {
    // Keep predictions whose center lies in at least one gt box (closed).
    std::vector<std::size_t> filtered;
    for (std::size_t i = 0; i < rec.predictions.size(); ++i) {
      const Point2D c = rec.predictions[i].box.center();
      for (const auto& g : rec.ground_truth) {
        if (c.x >= g.cx - g.w / 2 && c.x <= g.cx + g.w / 2 && c.y >= g.cy - g.h / 2 &&
            c.y <= g.cy + g.h / 2) {
          filtered.push_back(i);
          break;
        }
      }
    }

    CostMatrix costs(filtered.size(), rec.ground_truth.size());
    for (std::size_t fi = 0; fi < filtered.size(); ++fi) {
      const Point2D c = rec.predictions[filtered[fi]].box.center();
      for (std::size_t j = 0; j < rec.ground_truth.size(); ++j) {
        const Point2D g = rec.ground_truth[j].center();
        costs.at(fi, j) = std::hypot(c.x - g.x, c.y - g.y);
      }
    }
    const MatchResult match = hungarian(costs);

    const double img_tp = static_cast<double>(match.pairs.size());
    const double img_fp = static_cast<double>(rec.predictions.size()) - img_tp;
    const double img_fn = static_cast<double>(rec.ground_truth.size()) - img_tp;
    tp += img_tp;
    fp += img_fp;
    fn += img_fn;
    if (!rec.predictions.empty()) {
      macro_p_sum += img_tp / static_cast<double>(rec.predictions.size());
      ++macro_p_n;
    }
    if (!rec.ground_truth.empty()) {
      macro_r_sum += img_tp / static_cast<double>(rec.ground_truth.size());
      ++macro_r_n;
    }

    if (!match.pairs.empty()) {
      std::vector<double> dists;
      dists.reserve(match.pairs.size());
      for (const auto& [fi, j] : match.pairs) {
        dists.push_back(costs.at(fi, j));
        iou_sum += iou(rec.predictions[filtered[fi]].box, rec.ground_truth[j]);
        ++iou_pairs;
      }
      double mean = 0.0;
      for (double d : dists) mean += d;
      mean /= static_cast<double>(dists.size());
      sum_mean += mean;
      sum_median += percentile(dists, 50.0);
      sum_p95 += percentile(dists, 95.0);
      ++rep.images_with_matches;
    }
  }

  if (rep.images_with_matches > 0) {
    const double n = static_cast<double>(rep.images_with_matches);
    rep.mean_l2 = sum_mean / n;
    rep.mean_median_l2 = sum_median / n;
    rep.mean_p95_l2 = sum_p95 / n;
  }
  rep.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
  rep.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
  rep.f1 = rep.precision + rep.recall > 0.0
               ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
               : 0.0;
  rep.macro_precision = macro_p_n > 0 ? macro_p_sum / static_cast<double>(macro_p_n) : 0.0;
  rep.macro_recall = macro_r_n > 0 ? macro_r_sum / static_cast<double>(macro_r_n) : 0.0;
  rep.mean_iou_matched = iou_pairs > 0 ? iou_sum / static_cast<double>(iou_pairs) : 0.0;
  return rep;
}

MetricsReport evaluate(const std::vector<ImageRecord>& records,
                       const std::vector<int>& game_levels) {
  MetricsReport rep;
  rep.counts = count_stats(records);
  for (int level : game_levels) {
    double sum = 0.0;
    for (const auto& r : records) sum += game(r, level);
    rep.game.per_level[level] = sum / static_cast<double>(records.size());
  }
  const bool annotated = std::any_of(records.begin(), records.end(),
                                     [](const ImageRecord& r) { return !r.ground_truth.empty(); });
  if (annotated) rep.localization = localization_report(records);
  return rep;
}

std::string render_report(const MetricsReport& report) {
  std::string out;
  char line[128];
  auto add = [&](const char* key, double v) {
    std::snprintf(line, sizeof(line), "%s: %.4f\n", key, v);
    out += line;
  };

  out += "== counting ==\n";
  std::snprintf(line, sizeof(line), "images: %zu\n", report.counts.n_images);
  out += line;
  add("mae", report.counts.mae);
  add("rmse", report.counts.rmse);

  out += "== game ==\n";
  for (const auto& [level, score] : report.game.per_level) {
    std::snprintf(line, sizeof(line), "game[%d]: %.4f\n", level, score);
    out += line;
  }

  out += "== localization ==\n";
  if (!report.localization) {
    out += "absent: no instance annotations\n";
    return out;
  }
  const LocalizationReport& l = *report.localization;
  std::snprintf(line, sizeof(line), "images_with_matches: %zu\n", l.images_with_matches);
  out += line;
  add("mean_l2", l.mean_l2);
  add("mean_median_l2", l.mean_median_l2);
  add("mean_p95_l2", l.mean_p95_l2);
  add("precision", l.precision);
  add("recall", l.recall);
  add("f1", l.f1);
  add("macro_precision", l.macro_precision);
  add("macro_recall", l.macro_recall);
  add("mean_iou_matched", l.mean_iou_matched);
  return out;
}

}  // namespace chaincount
