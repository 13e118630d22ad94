#include <doctest.h>

#include <stdexcept>

#include "chaincount/geometry.hpp"
#include "chaincount/synth.hpp"

using namespace chaincount;

TEST_CASE("dominant_orientation picks the wider spread") {
  CHECK(dominant_orientation({{0, 0}, {10, 1}, {20, 0}}) == Axis::X);
  CHECK(dominant_orientation({{0, 0}, {1, 10}}) == Axis::Y);
}

TEST_CASE("dominant_orientation tie goes to Y (strict comparison)") {
  CHECK(dominant_orientation({{3, 3}}) == Axis::Y);
  CHECK(dominant_orientation({{0, 0}, {5, 5}}) == Axis::Y);
}

TEST_CASE("dominant_orientation rejects empty input") {
  CHECK_THROWS_AS(dominant_orientation({}), std::invalid_argument);
}

TEST_CASE("dominant_orientation is translation invariant") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<Point2D> pts;
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 9));
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 500), rng.uniform(0, 500)});
    const Axis base = dominant_orientation(pts);
    const double dx = rng.uniform(-1000, 1000), dy = rng.uniform(-1000, 1000);
    for (auto& p : pts) {
      p.x += dx;
      p.y += dy;
    }
    CHECK(dominant_orientation(pts) == base);
  }
}

TEST_CASE("sort_along basic ordering and tie-break") {
  CHECK(sort_along({{5, 0}, {1, 0}, {3, 0}}, Axis::X) == std::vector<std::size_t>{1, 2, 0});
  CHECK(sort_along({}, Axis::X).empty());
  CHECK(sort_along({{2, 9}, {2, 1}}, Axis::X) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("sort_along is a permutation and idempotent on sorted input") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<Point2D> pts;
    const int n = static_cast<int>(rng.uniform_int(0, 20));
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    const Axis axis = t % 2 ? Axis::X : Axis::Y;
    const auto order = sort_along(pts, axis);

    std::vector<char> seen(pts.size(), 0);
    for (std::size_t idx : order) {
      REQUIRE(idx < pts.size());
      CHECK(!seen[idx]);
      seen[idx] = 1;
    }

    std::vector<Point2D> sorted;
    for (std::size_t idx : order) sorted.push_back(pts[idx]);
    const auto again = sort_along(sorted, axis);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == i);
  }
}
