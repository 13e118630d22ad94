#pragma once

#include <cstdint>
#include <vector>

#include "chaincount/losses.hpp"

namespace chaincount {

struct RefineConfig {
  int steps = 500;
  double learning_rate = 0.05;
  int rematch_every = 25;
  LossWeights weights;
  FocalParams focal;
  std::uint64_t seed = 0;  // kept for interface stability; the descent itself is deterministic
};

struct RefineTrace {
  std::vector<LossBreakdown> per_step;  // steps + 1 entries, index 0 = initial state
  ChainInstance initial;
  ChainInstance final;
  int rematch_changes = 0;  // how many rematches actually altered the assignment
};

/// Deterministic descent on the composite loss over predicted centers and
/// scores, with the assignment refreshed every rematch_every steps.
/// Centers are updated with Adam (beta1 0.9, beta2 0.999, eps 1e-8) under
/// a cosine step-size schedule decaying from learning_rate to 0; scores
/// are optimized in logit space so they stay inside (0,1).
/// Throws std::runtime_error naming the step if the loss goes non-finite.
RefineTrace refine(const ChainInstance& inst, const RefineConfig& cfg);

/// Mean L2 distance between matched predicted and ground-truth centers.
double mean_center_error(const ChainInstance& inst);

}  // namespace chaincount
