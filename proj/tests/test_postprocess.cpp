#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chaincount/postprocess.hpp"
#include "chaincount/synth.hpp"

using namespace chaincount;

namespace {

Detection det(double x, double y, double score) { return {{x, y, 10.0, 10.0}, score}; }

}  // namespace

TEST_CASE("filter_by_confidence") {
  const std::vector<Detection> dets{det(0, 0, 0.9), det(1, 0, 0.2)};
  SUBCASE("drops below-threshold scores") {
    const auto kept = filter_by_confidence(dets, 0.26);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].score == 0.9);
  }
  SUBCASE("sigma 0 is the identity") { CHECK(filter_by_confidence(dets, 0.0) == dets); }
  SUBCASE("boundary score is retained (inclusive)") {
    const auto kept = filter_by_confidence({det(0, 0, 0.26)}, 0.26);
    CHECK(kept.size() == 1);
  }
}

TEST_CASE("dedup removes the lower-confidence close neighbor") {
  const DedupConfig cfg{5.0, 0.0};
  const auto out = dedup({det(0, 0, 0.9), det(3, 0, 0.6)}, cfg, Axis::X);
  REQUIRE(out.size() == 1);
  CHECK(out[0].score == 0.9);
}

TEST_CASE("dedup trivia") {
  const DedupConfig cfg{5.0, 0.0};
  CHECK(dedup({}, cfg, Axis::X).empty());
  SUBCASE("wide gaps pass through, sorted") {
    const auto out = dedup({det(20, 0, 0.5), det(0, 0, 0.9), det(10, 0, 0.7)}, cfg, Axis::X);
    REQUIRE(out.size() == 3);
    CHECK(out[0].box.cx == 0);
    CHECK(out[1].box.cx == 10);
    CHECK(out[2].box.cx == 20);
  }
  SUBCASE("threshold must be positive") {
    CHECK_THROWS_AS(dedup({det(0, 0, 0.5)}, DedupConfig{0.0, 0.0}, Axis::X),
                    std::invalid_argument);
  }
}

TEST_CASE("dedup resolves cascaded near-duplicates to a fixed point") {
  // A-B-C each 3px apart: B is dropped against C, then A-C gap is 6 > 5.
  const DedupConfig cfg{5.0, 0.0};
  const auto out = dedup({det(0, 0, 0.5), det(3, 0, 0.4), det(6, 0, 0.9)}, cfg, Axis::X);
  REQUIRE(out.size() == 2);
  CHECK(out[0].box.cx == 0);
  CHECK(out[1].box.cx == 6);
}

TEST_CASE("dedup properties on random corrupted scenes") {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng.uniform_int(0, 40));
    for (int i = 0; i < n; ++i) {
      dets.push_back(det(rng.uniform(0, 300), rng.uniform(0, 80), rng.uniform(0.01, 0.99)));
    }
    const Axis axis = t % 2 ? Axis::X : Axis::Y;
    const DedupConfig cfg{rng.uniform(1.0, 20.0), 0.0};
    const auto once = dedup(dets, cfg, axis);
    const auto twice = dedup(once, cfg, axis);
    CHECK(once == twice);          // idempotent
    CHECK(once.size() <= dets.size());

    // every output detection is an input detection
    for (const auto& d : once) {
      CHECK(std::find(dets.begin(), dets.end(), d) != dets.end());
    }

    // consecutive survivors respect the gap along the sweep axis
    for (std::size_t i = 0; i + 1 < once.size(); ++i) {
      const double gap =
          std::abs(coord(once[i + 1].box.center(), axis) - coord(once[i].box.center(), axis));
      CHECK(gap >= cfg.distance_threshold);
    }

    // the maximum-confidence input survives
    if (!dets.empty()) {
      const auto best =
          *std::max_element(dets.begin(), dets.end(),
                            [](const Detection& a, const Detection& b) { return a.score < b.score; });
      CHECK(std::find(once.begin(), once.end(), best) != once.end());
    }
  }
}
