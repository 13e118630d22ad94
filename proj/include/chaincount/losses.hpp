#pragma once

#include <vector>

#include "chaincount/assignment.hpp"
#include "chaincount/geometry.hpp"

namespace chaincount {

struct LossWeights {
  double lambda_loc = 10.0;
  double lambda_neigh = 100.0;
  double lambda_cls = 1.0;
};

struct LossBreakdown {
  double loc = 0.0;
  double neigh = 0.0;
  double cls = 0.0;
  double total = 0.0;
};

/// Everything a loss evaluation needs: predicted centers/scores, ground
/// truth centers, the (frozen) assignment, and the chain axis.
struct ChainInstance {
  std::vector<Point2D> pred_centers;
  std::vector<double> pred_scores;
  std::vector<Point2D> gt_centers;
  MatchResult matching;
  Axis axis = Axis::X;
};

struct LossGradient {
  std::vector<Point2D> d_centers;  // one 2-vector per prediction
  std::vector<double> d_scores;    // one real per prediction
};

/// Sum over matched pairs of the L1 distance between predicted and
/// ground-truth centers.
double localization_loss(const ChainInstance& inst);

/// Chain-gap consistency term: order matched pairs by ground-truth center
/// along the instance axis, take Euclidean distances between consecutive
/// gt centers (d_G) and between the correspondingly matched predicted
/// centers (d_P), and sum |d_P - d_G| over consecutive pairs. Zero when
/// fewer than two pairs are matched.
double neighboring_loss(const ChainInstance& inst);

/// Focal loss over detection scores: matched predictions contribute
/// L_pos(p), unmatched ones L_neg(p); summed.
double classification_loss(const std::vector<double>& scores,
                           const std::vector<char>& matched_mask,
                           const FocalParams& params);

LossBreakdown composite_loss(const ChainInstance& inst, const LossWeights& weights,
                             const FocalParams& params);

/// Analytic gradient of composite_loss().total with respect to predicted
/// centers and scores, with the matching held fixed. At kinks of |.| the
/// subgradient 0 is returned.
LossGradient composite_loss_gradient(const ChainInstance& inst, const LossWeights& weights,
                                     const FocalParams& params);

/// Central finite differences of composite_loss().total; the check oracle
/// for composite_loss_gradient (evaluates only the loss, never the
/// analytic path).
LossGradient composite_loss_fd_gradient(const ChainInstance& inst, const LossWeights& weights,
                                        const FocalParams& params, double step = 1e-5);

/// Parameters whose loss terms sit within `tol` of a |.| kink, where
/// analytic and numeric gradients legitimately disagree. Mirrors the
/// layout of LossGradient (true = near a kink).
struct KinkMask {
  std::vector<char> center_x;
  std::vector<char> center_y;
};
KinkMask kink_mask(const ChainInstance& inst, double tol = 1e-6);

/// Ordering of matched pairs by ground-truth center along the axis;
/// exposed because the refiner and tests need the same chain order.
std::vector<std::size_t> chain_order(const ChainInstance& inst);

}  // namespace chaincount
