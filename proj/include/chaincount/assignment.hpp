#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "chaincount/geometry.hpp"

namespace chaincount {

/// Dense rows x cols matrix of pairwise matching costs.
struct CostMatrix {
  std::size_t rows = 0;  // predictions
  std::size_t cols = 0;  // ground truth
  std::vector<double> values;  // row-major, rows*cols entries

  CostMatrix() = default;
  CostMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// One-to-one assignment. pairs covers min(rows, cols) entries; the
/// leftover indices of the larger side land in the unmatched lists.
struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred, gt), pred ascending
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;
  double total_cost = 0.0;
};

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
  double epsilon = 1e-8;
};

/// Classification matching cost L_pos(p) - L_neg(p) with
///   L_pos(p) = -alpha * (1-p)^gamma * log(p + eps)
///   L_neg(p) = -(1-alpha) * p^gamma * log(1-p + eps)
/// Monotonically decreasing in p. Throws std::invalid_argument for p
/// outside [0,1].
double focal_match_cost(double p, const FocalParams& params);

/// Entry (i,j) = L1 distance between box centers + focal_match_cost(score_i).
CostMatrix build_value_matrix(const std::vector<Detection>& preds,
                              const std::vector<BBox>& gts,
                              const FocalParams& params);

/// Minimum-cost one-to-one assignment covering min(rows, cols) pairs.
/// Shortest-augmenting-path implementation; certified against
/// brute_force_assignment in the test suite.
MatchResult hungarian(const CostMatrix& costs);

/// Exhaustive enumeration over all injections; the test oracle.
/// Refuses matrices with min(rows, cols) > 8.
MatchResult brute_force_assignment(const CostMatrix& costs);

}  // namespace chaincount
