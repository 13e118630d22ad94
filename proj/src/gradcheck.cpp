#include "chaincount/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace chaincount {

ChainInstance random_chain_instance(Rng& rng, int min_points, int max_points, double extent) {
  ChainInstance inst;
  const int n = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(min_points),
                                                 static_cast<std::uint64_t>(max_points)));
  std::vector<Detection> preds;
  std::vector<BBox> gts;
  for (int i = 0; i < n; ++i) {
    const double gx = rng.uniform(0.0, extent);
    const double gy = rng.uniform(0.0, extent);
    inst.gt_centers.push_back({gx, gy});
    gts.push_back({gx, gy, 10.0, 10.0});
    const double px = gx + rng.uniform(-5.0, 5.0);
    const double py = gy + rng.uniform(-5.0, 5.0);
    const double score = rng.uniform(0.05, 0.95);
    inst.pred_centers.push_back({px, py});
    inst.pred_scores.push_back(score);
    preds.push_back({{px, py, 10.0, 10.0}, score});
  }
  inst.axis = dominant_orientation(inst.gt_centers);
  inst.matching = hungarian(build_value_matrix(preds, gts, FocalParams{}));
  return inst;
}

GradCheckResult run_gradcheck(int trials, std::uint64_t seed, const LossWeights& weights,
                              const FocalParams& params, double fd_step, double kink_tol) {
  Rng rng(seed);
  GradCheckResult res;

  // rel = |a-n| / max(1, |a|, |n|), so tiny components compare absolutely.
  auto rel = [](double a, double n) {
    return std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)});
  };

  for (int t = 0; t < trials; ++t) {
    const ChainInstance inst = random_chain_instance(rng);
    const LossGradient analytic = composite_loss_gradient(inst, weights, params);
    const LossGradient numeric = composite_loss_fd_gradient(inst, weights, params, fd_step);
    const KinkMask kinks = kink_mask(inst, kink_tol);

    for (std::size_t i = 0; i < inst.pred_centers.size(); ++i) {
      if (kinks.center_x[i]) {
        ++res.skipped;
      } else {
        res.max_rel_error = std::max(res.max_rel_error,
                                     rel(analytic.d_centers[i].x, numeric.d_centers[i].x));
        ++res.checked;
      }
      if (kinks.center_y[i]) {
        ++res.skipped;
      } else {
        res.max_rel_error = std::max(res.max_rel_error,
                                     rel(analytic.d_centers[i].y, numeric.d_centers[i].y));
        ++res.checked;
      }
      res.max_rel_error =
          std::max(res.max_rel_error, rel(analytic.d_scores[i], numeric.d_scores[i]));
      ++res.checked;
    }
  }
  return res;
}

}  // namespace chaincount
