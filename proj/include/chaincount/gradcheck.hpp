#pragma once

#include <cstdint>

#include "chaincount/losses.hpp"
#include "chaincount/synth.hpp"

namespace chaincount {

/// Random loss instance for gradient checks: gt points scattered in
/// [0, extent]^2, predictions jittered off the gt, scores away from the
/// saturated ends, matching from the focal value matrix.
ChainInstance random_chain_instance(Rng& rng, int min_points = 3, int max_points = 20,
                                    double extent = 800.0);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;  // parameters compared
  std::size_t skipped = 0;  // parameters excluded for sitting on a |.| kink
};

/// Compares the analytic composite-loss gradient against central finite
/// differences over `trials` random instances. Coordinates within
/// kink_tol of a |.| kink are excluded; scores are always checked.
GradCheckResult run_gradcheck(int trials, std::uint64_t seed, const LossWeights& weights,
                              const FocalParams& params, double fd_step = 1e-5,
                              double kink_tol = 1e-6);

}  // namespace chaincount
