#include "fairpot/pareto.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace fairpot {

bool dominates(const TradeoffPoint& p, const TradeoffPoint& q) noexcept {
  return p.disparity <= q.disparity && p.accuracy >= q.accuracy &&
         (p.disparity < q.disparity || p.accuracy > q.accuracy);
}

std::vector<TradeoffPoint> pareto_frontier(std::vector<TradeoffPoint> points) {
  constexpr double kNoLambda = std::numeric_limits<double>::infinity();
  auto key = [&](const TradeoffPoint& p) {
    return std::make_tuple(p.disparity, -p.accuracy, p.lambda.value_or(kNoLambda), std::cref(p.method_tag),
                           p.replicate_id);
  };
  std::sort(points.begin(), points.end(), [&](const auto& l, const auto& r) { return key(l) < key(r); });

  // After the sort a point survives iff its accuracy beats every point before it.
  std::vector<TradeoffPoint> front;
  for (auto& p : points)
    if (front.empty() || p.accuracy > front.back().accuracy) front.push_back(std::move(p));
  return front;
}

}  // namespace fairpot
