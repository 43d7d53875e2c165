#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fairpot {

/// One evaluated configuration in the (disparity, accuracy) plane.
/// `lambda` is empty for methods without a trade-off parameter.
struct TradeoffPoint {
  std::optional<double> lambda;
  double accuracy = 0.0;
  double disparity = 0.0;
  std::string method_tag;
  int replicate_id = 0;

  friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

/// p dominates q when it has no more disparity and no less accuracy, strictly
/// better in at least one.
bool dominates(const TradeoffPoint& p, const TradeoffPoint& q) noexcept;

/// Non-dominated points sorted by ascending disparity. Points sharing both
/// coordinates collapse to one: lowest lambda, then method tag, then replicate.
std::vector<TradeoffPoint> pareto_frontier(std::vector<TradeoffPoint> points);

}  // namespace fairpot
