#include "chaincount/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chaincount {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double logit(double p) {
  const double q = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return std::log(q / (1.0 - q));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

MatchResult rematch(const ChainInstance& inst, const FocalParams& focal) {
  std::vector<Detection> preds(inst.pred_centers.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    preds[i].box = {inst.pred_centers[i].x, inst.pred_centers[i].y, 1.0, 1.0};
    preds[i].score = inst.pred_scores[i];
  }
  std::vector<BBox> gts(inst.gt_centers.size());
  for (std::size_t j = 0; j < gts.size(); ++j) {
    gts[j] = {inst.gt_centers[j].x, inst.gt_centers[j].y, 1.0, 1.0};
  }
  return hungarian(build_value_matrix(preds, gts, focal));
}

}  // namespace

double mean_center_error(const ChainInstance& inst) {
  if (inst.matching.pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [pi, gi] : inst.matching.pairs) {
    sum += std::hypot(inst.pred_centers[pi].x - inst.gt_centers[gi].x,
                      inst.pred_centers[pi].y - inst.gt_centers[gi].y);
  }
  return sum / static_cast<double>(inst.matching.pairs.size());
}

RefineTrace refine(const ChainInstance& inst, const RefineConfig& cfg) {
  if (inst.gt_centers.empty()) {
    throw std::invalid_argument("refine: no ground-truth points");
  }
  if (cfg.rematch_every <= 0 || cfg.steps <= 0 || cfg.rematch_every > cfg.steps) {
    throw std::invalid_argument("refine: require 0 < rematch_every <= steps");
  }

  RefineTrace trace;
  trace.initial = inst;

  ChainInstance cur = inst;
  const std::size_t n = cur.pred_centers.size();
  std::vector<double> logits(n);
  for (std::size_t i = 0; i < n; ++i) logits[i] = logit(cur.pred_scores[i]);

  // Adam state: x, y per center, then one logit per score.
  std::vector<double> m(3 * n, 0.0), v(3 * n, 0.0);

  trace.per_step.push_back(composite_loss(cur, cfg.weights, cfg.focal));

  for (int t = 1; t <= cfg.steps; ++t) {
    const LossGradient g = composite_loss_gradient(cur, cfg.weights, cfg.focal);
    const double lr =
        cfg.learning_rate * 0.5 *
        (1.0 + std::cos(std::numbers::pi * static_cast<double>(t - 1) / cfg.steps));
    const double bc1 = 1.0 - std::pow(kBeta1, t);
    const double bc2 = 1.0 - std::pow(kBeta2, t);

    auto adam = [&](std::size_t slot, double grad) {
      m[slot] = kBeta1 * m[slot] + (1.0 - kBeta1) * grad;
      v[slot] = kBeta2 * v[slot] + (1.0 - kBeta2) * grad * grad;
      return lr * (m[slot] / bc1) / (std::sqrt(v[slot] / bc2) + kAdamEps);
    };

    for (std::size_t i = 0; i < n; ++i) {
      cur.pred_centers[i].x -= adam(3 * i, g.d_centers[i].x);
      cur.pred_centers[i].y -= adam(3 * i + 1, g.d_centers[i].y);
      const double dlogit = g.d_scores[i] * cur.pred_scores[i] * (1.0 - cur.pred_scores[i]);
      logits[i] -= adam(3 * i + 2, dlogit);
      cur.pred_scores[i] = sigmoid(logits[i]);
    }

    if (t % cfg.rematch_every == 0) {
      MatchResult fresh = rematch(cur, cfg.focal);
      if (fresh.pairs != cur.matching.pairs) ++trace.rematch_changes;
      cur.matching = std::move(fresh);
    }

    const LossBreakdown b = composite_loss(cur, cfg.weights, cfg.focal);
    if (!std::isfinite(b.total)) {
      throw std::runtime_error("refine: non-finite loss at step " + std::to_string(t));
    }
    trace.per_step.push_back(b);
  }

  trace.final = cur;
  return trace;
}

}  // namespace chaincount
