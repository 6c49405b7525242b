#pragma once

#include <span>
#include <utility>

namespace mgsizer {

struct ObjectivePoint {
  double cost = 0.0;  // $
  double pec = 0.0;   // kg
};

// Worst-case corner for the objective rectangle area.
struct WorstCase {
  double cost_star = 1.6e7;  // $
  double pec_star = 4.0e6;   // kg
};

struct OraValue {
  double area = 0.0;         // $ * kg
  bool beyond_worst = false; // point at or past the corner on some axis
};

// (C* - cost) * (P* - pec), returned as-is; beyond_worst flags points
// whose area is not meaningful.
OraValue ora(const ObjectivePoint& point, const WorstCase& w);

struct LargestOra {
  double area = 0.0;
  std::size_t index = 0;     // into the frontier span
  bool beyond_worst = false; // every point was past the corner
  bool empty = true;
};

// Maximum area over the frontier, preferring points inside the corner.
LargestOra largest_ora(std::span<const ObjectivePoint> frontier, const WorstCase& w);

struct DiverseCount {
  std::size_t n_cost = 0;
  std::size_t n_pec = 0;
};

// Greedy epsilon-spacing count along each axis: walk the sorted values from
// the smallest, keeping a point when it is at least `gap` past the last
// kept one.
DiverseCount diverse_count(std::span<const ObjectivePoint> frontier, double cost_gap,
                           double pec_gap);

}  // namespace mgsizer
