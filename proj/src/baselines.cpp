#include "fairpot/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairpot/error.hpp"

namespace fairpot::baselines {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<double> default_post_logit_grid() {
  constexpr int kCount = 50;
  std::vector<double> grid(kCount);
  for (int k = 0; k < kCount; ++k) grid[k] = std::pow(10.0, -1.0 + 2.0 * k / (kCount - 1));
  grid.front() = 0.1;
  grid.back() = 10.0;
  return grid;
}

PostLogitParams fit_post_logit(const ScoreSet& train, std::span<const double> grid, double offset) {
  if (grid.empty()) throw DomainError("post-logit scale grid is empty");
  if (!train.has_group(Group::A) || !train.has_group(Group::B))
    throw DomainError("post-logit fitting needs both groups in the training scores");

  PostLogitParams best{grid.front(), offset, {grid.begin(), grid.end()}};
  double best_gap = INFINITY;
  for (double scale : grid) {
    if (!(scale > 0.0)) throw DomainError("post-logit scales must be positive");
    double gap = xauc_disparity(apply_post_logit({scale, offset, {}}, train));
    if (gap < best_gap || (gap == best_gap && scale < best.scale)) {
      best_gap = gap;
      best.scale = scale;
    }
  }
  return best;
}

std::vector<double> apply_post_logit(const PostLogitParams& params, std::span<const double> scores_b) {
  std::vector<double> out;
  out.reserve(scores_b.size());
  for (double s : scores_b) out.push_back(sigmoid(params.scale * s + params.offset));
  return out;
}

ScoreSet apply_post_logit(const PostLogitParams& params, const ScoreSet& s) {
  auto indices = s.group_indices(Group::B);
  return s.with_scores(indices, apply_post_logit(params, s.group_scores(Group::B)));
}

EmpiricalQuantile::EmpiricalQuantile(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw DomainError("quantile function of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalQuantile::level(double score) const {
  const auto n = sorted_.size();
  if (n == 1) return 0.5;
  if (score < sorted_.front()) return 0.0;
  if (score >= sorted_.back()) return 1.0;
  auto k = static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), score) - sorted_.begin()) - 1;
  double frac = (score - sorted_[k]) / (sorted_[k + 1] - sorted_[k]);
  return (static_cast<double>(k) + frac) / static_cast<double>(n - 1);
}

double EmpiricalQuantile::value(double level) const {
  const auto n = sorted_.size();
  double pos = std::clamp(level, 0.0, 1.0) * static_cast<double>(n - 1);
  auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= n) return sorted_.back();
  return sorted_[k] + (pos - static_cast<double>(k)) * (sorted_[k + 1] - sorted_[k]);
}

ScoreSet wasserstein_fair(const ScoreSet& train, const ScoreSet& test) {
  std::vector<std::size_t> all(test.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return wasserstein_fair(train, test, all);
}

ScoreSet wasserstein_fair(const ScoreSet& train, const ScoreSet& test, std::span<const std::size_t> indices) {
  for (Group g : {Group::A, Group::B}) {
    if (!train.has_group(g))
      throw DomainError(std::string("wasserstein-fair: training scores lack group ") + to_char(g));
    if (!test.has_group(g)) throw DomainError(std::string("wasserstein-fair: test scores lack group ") + to_char(g));
  }
  const EmpiricalQuantile qa(train.group_scores(Group::A));
  const EmpiricalQuantile qb(train.group_scores(Group::B));
  const double na = static_cast<double>(qa.size());
  const double nb = static_cast<double>(qb.size());
  const double wa = na / (na + nb);
  const double wb = nb / (na + nb);

  std::vector<double> scores;
  scores.reserve(indices.size());
  for (auto i : indices) {
    const auto& r = test[i];
    double u = (r.group == Group::A ? qa : qb).level(r.score);
    scores.push_back(std::clamp(wa * qa.value(u) + wb * qb.value(u), 0.0, 1.0));
  }
  return test.with_scores(indices, scores);
}

}  // namespace fairpot::baselines
