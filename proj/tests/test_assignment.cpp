#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chaincount/assignment.hpp"
#include "chaincount/synth.hpp"

using namespace chaincount;

TEST_CASE("focal_match_cost scalar values") {
  const FocalParams fp;
  // Frozen from an independent scalar evaluation of both branch formulas.
  CHECK(focal_match_cost(0.5, fp) == doctest::Approx(-0.08664339506999316).epsilon(1e-12));
  CHECK(focal_match_cost(0.9, fp) == doctest::Approx(-1.3985569819825194).epsilon(1e-12));
  CHECK(std::abs(focal_match_cost(0.9, fp)) > std::abs(focal_match_cost(0.5, fp)));
}

TEST_CASE("focal_match_cost with alpha 0 reduces to the negative branch") {
  FocalParams fp;
  fp.alpha = 0.0;
  const double p = 0.7;
  const double neg = -(1.0 - fp.alpha) * std::pow(p, fp.gamma) * std::log(1.0 - p + fp.epsilon);
  CHECK(focal_match_cost(p, fp) == doctest::Approx(-neg).epsilon(1e-15));
}

TEST_CASE("focal_match_cost is monotonically decreasing in p") {
  const FocalParams fp;
  double prev = focal_match_cost(0.01, fp);
  for (double p = 0.05; p <= 0.99; p += 0.02) {
    const double cur = focal_match_cost(p, fp);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("focal_match_cost rejects p outside [0,1]") {
  CHECK_THROWS_AS(focal_match_cost(-0.1, FocalParams{}), std::invalid_argument);
  CHECK_THROWS_AS(focal_match_cost(1.1, FocalParams{}), std::invalid_argument);
}

TEST_CASE("build_value_matrix combines L1 distance and focal cost") {
  const FocalParams fp;
  const double s = 0.6;
  std::vector<Detection> preds{{{0, 0, 2, 2}, s}};
  std::vector<BBox> gts{{3, 4, 2, 2}};
  const CostMatrix m = build_value_matrix(preds, gts, fp);
  CHECK(m.at(0, 0) == doctest::Approx(7.0 + focal_match_cost(s, fp)).epsilon(1e-15));
}

TEST_CASE("build_value_matrix at zero distance is strongly negative for confident preds") {
  const FocalParams fp;
  std::vector<Detection> preds{{{10, 10, 2, 2}, 1.0 - 1e-9}};
  std::vector<BBox> gts{{10, 10, 4, 4}};
  const CostMatrix m = build_value_matrix(preds, gts, fp);
  CHECK(m.at(0, 0) == doctest::Approx(focal_match_cost(1.0 - 1e-9, fp)));
  CHECK(m.at(0, 0) < -1.0);
}

TEST_CASE("build_value_matrix hand-computed 2x2") {
  const FocalParams fp;
  std::vector<Detection> preds{{{0, 0, 1, 1}, 0.5}, {{10, 0, 1, 1}, 0.9}};
  std::vector<BBox> gts{{2, 0, 1, 1}, {12, 0, 1, 1}};
  const CostMatrix m = build_value_matrix(preds, gts, fp);
  const double c5 = focal_match_cost(0.5, fp), c9 = focal_match_cost(0.9, fp);
  CHECK(m.at(0, 0) == doctest::Approx(2.0 + c5));
  CHECK(m.at(0, 1) == doctest::Approx(12.0 + c5));
  CHECK(m.at(1, 0) == doctest::Approx(8.0 + c9));
  CHECK(m.at(1, 1) == doctest::Approx(2.0 + c9));
}

TEST_CASE("build_value_matrix entries decrease strictly in score at fixed distance") {
  const FocalParams fp;
  std::vector<BBox> gts{{50, 50, 4, 4}};
  double prev = 1e300;
  for (double s = 0.1; s < 1.0; s += 0.1) {
    std::vector<Detection> preds{{{20, 50, 4, 4}, s}};
    const double v = build_value_matrix(preds, gts, fp).at(0, 0);
    CHECK(v < prev);
    prev = v;
  }
}

namespace {

CostMatrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  CostMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

bool valid_injection(const CostMatrix& m, const MatchResult& r) {
  std::vector<char> pred_used(m.rows, 0), gt_used(m.cols, 0);
  for (const auto& [i, j] : r.pairs) {
    if (i >= m.rows || j >= m.cols) return false;
    if (pred_used[i] || gt_used[j]) return false;
    pred_used[i] = gt_used[j] = 1;
  }
  return r.pairs.size() == std::min(m.rows, m.cols);
}

}  // namespace

TEST_CASE("hungarian small cases") {
  SUBCASE("2x2 off-diagonal optimum") {
    const auto r = hungarian(make_matrix({{1, 2}, {2, 4}}));
    CHECK(r.total_cost == doctest::Approx(4.0));
    CHECK(valid_injection(make_matrix({{1, 2}, {2, 4}}), r));
  }
  SUBCASE("zero diagonal picks the identity") {
    const auto r = hungarian(make_matrix({{0, 100, 100}, {100, 0, 100}, {100, 100, 0}}));
    CHECK(r.total_cost == 0.0);
    for (const auto& [i, j] : r.pairs) CHECK(i == j);
  }
  SUBCASE("1x2 picks the row minimum") {
    const auto r = hungarian(make_matrix({{3, 1}}));
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(r.unmatched_gts == std::vector<std::size_t>{0});
    CHECK(r.total_cost == doctest::Approx(1.0));
  }
  SUBCASE("empty matrix") {
    const auto r = hungarian(CostMatrix{});
    CHECK(r.pairs.empty());
    CHECK(r.total_cost == 0.0);
  }
}

TEST_CASE("brute_force_assignment edge cases") {
  const auto r = brute_force_assignment(CostMatrix(0, 3));
  CHECK(r.pairs.empty());
  CHECK(r.unmatched_gts.size() == 3);
  CHECK_THROWS_AS(brute_force_assignment(CostMatrix(9, 9)), std::invalid_argument);
}

TEST_CASE("hungarian equals the brute-force oracle on random matrices") {
  Rng rng(1234);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = rng.uniform_int(1, 7);
    const std::size_t m = rng.uniform_int(1, 7);
    CostMatrix c(n, m);
    for (double& v : c.values) v = rng.uniform(-10.0, 10.0);
    const auto h = hungarian(c);
    const auto b = brute_force_assignment(c);
    CHECK(h.total_cost == b.total_cost);  // identical arithmetic expected
    CHECK(valid_injection(c, h));
    CHECK(valid_injection(c, b));
  }
}

TEST_CASE("adding a constant to a square matrix shifts total cost by n*c") {
  Rng rng(99);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = rng.uniform_int(2, 6);
    CostMatrix c(n, n);
    for (double& v : c.values) v = rng.uniform(-10.0, 10.0);
    const double shift = rng.uniform(-5.0, 5.0);
    CostMatrix shifted = c;
    for (double& v : shifted.values) v += shift;
    const auto base = hungarian(c);
    const auto moved = hungarian(shifted);
    CHECK(moved.total_cost ==
          doctest::Approx(base.total_cost + static_cast<double>(n) * shift).epsilon(1e-9));
  }
}
