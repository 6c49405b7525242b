#include <doctest.h>

#include <vector>

#include "mgsizer/metrics.hpp"

using namespace mgsizer;

TEST_CASE("objective rectangle area") {
  const WorstCase w;
  CHECK(ora({7858551.0, 3276596.0}, w).area == doctest::Approx(5.889556772396e12).epsilon(1e-12));
  CHECK(ora({15140305.0, 1575922.0}, w).area == doctest::Approx(2.083967736210e12).epsilon(1e-12));
  const OraValue corner = ora({1.6e7, 4e6}, w);
  CHECK(corner.area == 0.0);
  CHECK(corner.beyond_worst);
  CHECK(ora({2e7, 5e6}, w).beyond_worst);
  CHECK_FALSE(ora({1e7, 1e6}, w).beyond_worst);
  // Strictly decreasing in each coordinate inside the corner.
  CHECK(ora({1e7, 1e6}, w).area > ora({1.1e7, 1e6}, w).area);
  CHECK(ora({1e7, 1e6}, w).area > ora({1e7, 1.1e6}, w).area);
}

TEST_CASE("largest ora") {
  const WorstCase w;
  const std::vector<ObjectivePoint> two{{15140305.0, 1575922.0}, {7858551.0, 3276596.0}};
  const LargestOra l = largest_ora(two, w);
  CHECK(l.index == 1);
  CHECK(l.area == doctest::Approx(5.8896e12).epsilon(1e-4));
  CHECK_FALSE(l.beyond_worst);
  CHECK(largest_ora(std::vector<ObjectivePoint>{}, w).empty);
  const std::vector<ObjectivePoint> single{{1e7, 2e6}};
  CHECK(largest_ora(single, w).area == doctest::Approx(ora(single[0], w).area));
  // A past-corner point with a large positive product never wins.
  const std::vector<ObjectivePoint> mixed{{3e7, 5e6}, {1.5e7, 3.9e6}};
  CHECK(largest_ora(mixed, w).index == 1);
}

TEST_CASE("diverse count") {
  const std::vector<ObjectivePoint> pts{{0.0, 0.0}, {1.5e5, 0.0}, {1.6e5, 0.0}, {4e5, 0.0}};
  CHECK(diverse_count(pts, 1e5, 2e4).n_cost == 3);
  CHECK(diverse_count(pts, 1e5, 2e4).n_pec == 1);
  CHECK(diverse_count(std::vector<ObjectivePoint>{}, 1e5, 2e4).n_cost == 0);
  const std::vector<ObjectivePoint> one{{5.0, 5.0}};
  CHECK(diverse_count(one, 1e5, 2e4).n_cost == 1);
  CHECK(diverse_count(one, 1e5, 2e4).n_pec == 1);
  // Monotone nonincreasing in the gap.
  std::vector<ObjectivePoint> line;
  for (int i = 0; i < 40; ++i) line.push_back({i * 3.7e4, (40 - i) * 1.1e4});
  std::size_t prev = 1000;
  for (double gap = 1e4; gap < 1e6; gap *= 1.5) {
    const auto n = diverse_count(line, gap, 2e4).n_cost;
    CHECK(n <= prev);
    prev = n;
  }
}
