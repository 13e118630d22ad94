#include "chaincount/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace chaincount {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double l2(const Point2D& a, const Point2D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// d/dp of the focal branches. The gamma factor is skipped when gamma == 0
// so pow(x, -1) never fires.
double d_focal_pos(double p, const FocalParams& fp) {
  const double mod = fp.gamma > 0.0 ? fp.gamma * std::pow(1.0 - p, fp.gamma - 1.0) : 0.0;
  return fp.alpha * (mod * std::log(p + fp.epsilon) - std::pow(1.0 - p, fp.gamma) / (p + fp.epsilon));
}

double d_focal_neg(double p, const FocalParams& fp) {
  const double mod = fp.gamma > 0.0 ? fp.gamma * std::pow(p, fp.gamma - 1.0) : 0.0;
  return -(1.0 - fp.alpha) * (mod * std::log(1.0 - p + fp.epsilon) - std::pow(p, fp.gamma) / (1.0 - p + fp.epsilon));
}

double focal_pos(double p, const FocalParams& fp) {
  return -fp.alpha * std::pow(1.0 - p, fp.gamma) * std::log(p + fp.epsilon);
}

double focal_neg(double p, const FocalParams& fp) {
  return -(1.0 - fp.alpha) * std::pow(p, fp.gamma) * std::log(1.0 - p + fp.epsilon);
}

std::vector<char> matched_mask_of(const ChainInstance& inst) {
  std::vector<char> mask(inst.pred_scores.size(), 0);
  for (const auto& [pi, gi] : inst.matching.pairs) mask[pi] = 1;
  return mask;
}

}  // namespace

std::vector<std::size_t> chain_order(const ChainInstance& inst) {
  std::vector<Point2D> gts;
  gts.reserve(inst.matching.pairs.size());
  for (const auto& [pi, gi] : inst.matching.pairs) gts.push_back(inst.gt_centers[gi]);
  return sort_along(gts, inst.axis);
}

double localization_loss(const ChainInstance& inst) {
  double sum = 0.0;
  for (const auto& [pi, gi] : inst.matching.pairs) {
    const Point2D& p = inst.pred_centers[pi];
    const Point2D& g = inst.gt_centers[gi];
    sum += std::abs(p.x - g.x) + std::abs(p.y - g.y);
  }
  return sum;
}

double neighboring_loss(const ChainInstance& inst) {
  const auto order = chain_order(inst);
  if (order.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto& [pa, ga] = inst.matching.pairs[order[k]];
    const auto& [pb, gb] = inst.matching.pairs[order[k + 1]];
    const double d_g = l2(inst.gt_centers[ga], inst.gt_centers[gb]);
    const double d_p = l2(inst.pred_centers[pa], inst.pred_centers[pb]);
    sum += std::abs(d_p - d_g);
  }
  return sum;
}

double classification_loss(const std::vector<double>& scores,
                           const std::vector<char>& matched_mask,
                           const FocalParams& params) {
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    sum += matched_mask[i] ? focal_pos(scores[i], params) : focal_neg(scores[i], params);
  }
  return sum;
}

LossBreakdown composite_loss(const ChainInstance& inst, const LossWeights& weights,
                             const FocalParams& params) {
  LossBreakdown b;
  b.loc = localization_loss(inst);
  b.neigh = neighboring_loss(inst);
  b.cls = classification_loss(inst.pred_scores, matched_mask_of(inst), params);
  b.total = weights.lambda_loc * b.loc + weights.lambda_neigh * b.neigh + weights.lambda_cls * b.cls;
  return b;
}

LossGradient composite_loss_gradient(const ChainInstance& inst, const LossWeights& weights,
                                     const FocalParams& params) {
  const std::size_t n = inst.pred_centers.size();
  LossGradient g;
  g.d_centers.assign(n, {0.0, 0.0});
  g.d_scores.assign(n, 0.0);

  for (const auto& [pi, gi] : inst.matching.pairs) {
    const Point2D& p = inst.pred_centers[pi];
    const Point2D& gt = inst.gt_centers[gi];
    g.d_centers[pi].x += weights.lambda_loc * sgn(p.x - gt.x);
    g.d_centers[pi].y += weights.lambda_loc * sgn(p.y - gt.y);
  }

  const auto order = chain_order(inst);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto& [pa, ga] = inst.matching.pairs[order[k]];
    const auto& [pb, gb] = inst.matching.pairs[order[k + 1]];
    const Point2D& a = inst.pred_centers[pa];
    const Point2D& b = inst.pred_centers[pb];
    const double d_g = l2(inst.gt_centers[ga], inst.gt_centers[gb]);
    const double d_p = l2(a, b);
    if (d_p <= 0.0) continue;  // unit vector undefined; subgradient 0
    const double s = weights.lambda_neigh * sgn(d_p - d_g);
    const double ux = (b.x - a.x) / d_p;
    const double uy = (b.y - a.y) / d_p;
    g.d_centers[pb].x += s * ux;
    g.d_centers[pb].y += s * uy;
    g.d_centers[pa].x -= s * ux;
    g.d_centers[pa].y -= s * uy;
  }

  const auto mask = matched_mask_of(inst);
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = mask[i] ? d_focal_pos(inst.pred_scores[i], params)
                              : d_focal_neg(inst.pred_scores[i], params);
    g.d_scores[i] = weights.lambda_cls * dp;
  }
  return g;
}

LossGradient composite_loss_fd_gradient(const ChainInstance& inst, const LossWeights& weights,
                                        const FocalParams& params, double step) {
  ChainInstance work = inst;
  const std::size_t n = inst.pred_centers.size();
  LossGradient g;
  g.d_centers.assign(n, {0.0, 0.0});
  g.d_scores.assign(n, 0.0);

  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + step;
    const double hi = composite_loss(work, weights, params).total;
    slot = saved - step;
    const double lo = composite_loss(work, weights, params).total;
    slot = saved;
    return (hi - lo) / (2.0 * step);
  };

  for (std::size_t i = 0; i < n; ++i) {
    g.d_centers[i].x = central(work.pred_centers[i].x);
    g.d_centers[i].y = central(work.pred_centers[i].y);
    g.d_scores[i] = central(work.pred_scores[i]);
  }
  return g;
}

KinkMask kink_mask(const ChainInstance& inst, double tol) {
  const std::size_t n = inst.pred_centers.size();
  KinkMask m;
  m.center_x.assign(n, 0);
  m.center_y.assign(n, 0);

  for (const auto& [pi, gi] : inst.matching.pairs) {
    if (std::abs(inst.pred_centers[pi].x - inst.gt_centers[gi].x) < tol) m.center_x[pi] = 1;
    if (std::abs(inst.pred_centers[pi].y - inst.gt_centers[gi].y) < tol) m.center_y[pi] = 1;
  }

  const auto order = chain_order(inst);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto& [pa, ga] = inst.matching.pairs[order[k]];
    const auto& [pb, gb] = inst.matching.pairs[order[k + 1]];
    const double d_g = l2(inst.gt_centers[ga], inst.gt_centers[gb]);
    const double d_p = l2(inst.pred_centers[pa], inst.pred_centers[pb]);
    if (std::abs(d_p - d_g) < tol || d_p < tol) {
      m.center_x[pa] = m.center_y[pa] = 1;
      m.center_x[pb] = m.center_y[pb] = 1;
    }
  }
  return m;
}

}  // namespace chaincount
