#include "mgsizer/metrics.hpp"

#include <algorithm>
#include <vector>

namespace mgsizer {
namespace {

std::size_t spaced_count(std::vector<double> values, double gap) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t n = 1;
  double last = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - last >= gap) {
      ++n;
      last = values[i];
    }
  }
  return n;
}

}  // namespace

OraValue ora(const ObjectivePoint& p, const WorstCase& w) {
  const double dc = w.cost_star - p.cost;
  const double dp = w.pec_star - p.pec;
  return OraValue{dc * dp, dc <= 0.0 || dp <= 0.0};
}

LargestOra largest_ora(std::span<const ObjectivePoint> frontier, const WorstCase& w) {
  LargestOra best;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const OraValue v = ora(frontier[i], w);
    const bool better = best.empty || (best.beyond_worst && !v.beyond_worst) ||
                        (best.beyond_worst == v.beyond_worst && v.area > best.area);
    if (better) {
      best.area = v.area;
      best.index = i;
      best.beyond_worst = v.beyond_worst;
      best.empty = false;
    }
  }
  return best;
}

DiverseCount diverse_count(std::span<const ObjectivePoint> frontier, double cost_gap,
                           double pec_gap) {
  std::vector<double> costs, pecs;
  costs.reserve(frontier.size());
  pecs.reserve(frontier.size());
  for (const auto& p : frontier) {
    costs.push_back(p.cost);
    pecs.push_back(p.pec);
  }
  return DiverseCount{spaced_count(std::move(costs), cost_gap),
                      spaced_count(std::move(pecs), pec_gap)};
}

}  // namespace mgsizer
