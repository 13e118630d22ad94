#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chaincount/refine.hpp"
#include "chaincount/synth.hpp"

using namespace chaincount;

namespace {

// 20-point chain along x, spacing 30, jittered by +/- jitter px per
// coordinate; scores fixed at 0.9; identity matching.
ChainInstance jittered_chain(std::uint64_t seed, int n = 20, double spacing = 30.0,
                             double jitter = 2.0) {
  Rng rng(seed);
  ChainInstance inst;
  inst.axis = Axis::X;
  for (int i = 0; i < n; ++i) {
    const double gx = 50.0 + spacing * i;
    const double gy = 100.0;
    inst.gt_centers.push_back({gx, gy});
    inst.pred_centers.push_back(
        {gx + rng.uniform(-jitter, jitter), gy + rng.uniform(-jitter, jitter)});
    inst.pred_scores.push_back(0.9);
    inst.matching.pairs.emplace_back(i, i);
  }
  return inst;
}

}  // namespace

TEST_CASE("refine from the optimum stays put") {
  ChainInstance inst = jittered_chain(3, 10, 30.0, 0.0);
  RefineConfig cfg;
  cfg.steps = 50;
  cfg.rematch_every = 10;
  const RefineTrace trace = refine(inst, cfg);
  REQUIRE(trace.per_step.size() == 51);
  CHECK(trace.per_step.front().loc == 0.0);
  CHECK(trace.per_step.back().loc == doctest::Approx(0.0).epsilon(1e-9));
  for (std::size_t i = 0; i < inst.pred_centers.size(); ++i) {
    CHECK(trace.final.pred_centers[i].x == doctest::Approx(inst.pred_centers[i].x).epsilon(1e-12));
    CHECK(trace.final.pred_centers[i].y == doctest::Approx(inst.pred_centers[i].y).epsilon(1e-12));
  }
}

TEST_CASE("refine reduces the neighboring term on a jittered chain") {
  const ChainInstance inst = jittered_chain(0);
  RefineConfig cfg;  // defaults: 500 steps, lr 0.05, lambda (10,100,1)
  const RefineTrace trace = refine(inst, cfg);
  REQUIRE(trace.per_step.size() == 501);
  CHECK(trace.per_step.back().neigh <= 0.10 * trace.per_step.front().neigh);
  CHECK(mean_center_error(trace.final) <= 0.5 * mean_center_error(trace.initial));
}

TEST_CASE("disabling the neighboring weight leaves a larger final neighboring term") {
  const ChainInstance inst = jittered_chain(0);
  RefineConfig with;
  RefineConfig without = with;
  without.weights.lambda_neigh = 0.0;
  const double n_with = refine(inst, with).per_step.back().neigh;
  const double n_without = refine(inst, without).per_step.back().neigh;
  CHECK(n_without > n_with);
}

TEST_CASE("refine is deterministic") {
  const ChainInstance inst = jittered_chain(7);
  RefineConfig cfg;
  cfg.steps = 120;
  const RefineTrace a = refine(inst, cfg);
  const RefineTrace b = refine(inst, cfg);
  REQUIRE(a.per_step.size() == b.per_step.size());
  for (std::size_t s = 0; s < a.per_step.size(); ++s) {
    CHECK(a.per_step[s].total == b.per_step[s].total);  // bitwise
  }
  for (std::size_t i = 0; i < a.final.pred_centers.size(); ++i) {
    CHECK(a.final.pred_centers[i].x == b.final.pred_centers[i].x);
    CHECK(a.final.pred_centers[i].y == b.final.pred_centers[i].y);
  }
}

TEST_CASE("minimum over the trace never exceeds the initial total") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ChainInstance inst = jittered_chain(seed);
    RefineConfig cfg;
    cfg.steps = 200;
    const RefineTrace trace = refine(inst, cfg);
    double lowest = trace.per_step.front().total;
    for (const auto& b : trace.per_step) lowest = std::min(lowest, b.total);
    CHECK(lowest <= trace.per_step.front().total);
    CHECK(trace.per_step.back().total <= trace.per_step.front().total);
  }
}

TEST_CASE("gt gaps are read-only under a neigh-only objective") {
  const ChainInstance inst = jittered_chain(11);
  RefineConfig cfg;
  cfg.steps = 100;
  cfg.weights = {0.0, 50.0, 0.0};  // loc 0, neigh 50, cls 0
  const RefineTrace trace = refine(inst, cfg);
  for (std::size_t i = 0; i < inst.gt_centers.size(); ++i) {
    CHECK(trace.final.gt_centers[i] == inst.gt_centers[i]);
  }
}

TEST_CASE("refine validates its configuration") {
  const ChainInstance inst = jittered_chain(1);
  RefineConfig cfg;
  cfg.rematch_every = cfg.steps + 1;
  CHECK_THROWS_AS(refine(inst, cfg), std::invalid_argument);
  ChainInstance empty;
  empty.pred_centers = inst.pred_centers;
  empty.pred_scores = inst.pred_scores;
  CHECK_THROWS_AS(refine(empty, RefineConfig{}), std::invalid_argument);
}
