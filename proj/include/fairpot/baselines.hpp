#pragma once

#include <span>
#include <vector>

#include "fairpot/metrics.hpp"

namespace fairpot::baselines {

/// Group-b rescaling s -> sigmoid(scale * s + offset).
struct PostLogitParams {
  double scale = 1.0;
  double offset = 0.0;
  std::vector<double> grid;
};

/// 50 log-spaced scales covering [0.1, 10].
std::vector<double> default_post_logit_grid();

/// Picks the grid scale minimizing the training xAUC gap after rescaling
/// group b; ties go to the smallest scale.
PostLogitParams fit_post_logit(const ScoreSet& train, std::span<const double> grid, double offset = 0.0);

std::vector<double> apply_post_logit(const PostLogitParams& params, std::span<const double> scores_b);

/// Group b of `s` passed through the post-logit map; group a untouched.
ScoreSet apply_post_logit(const PostLogitParams& params, const ScoreSet& s);

/// Empirical quantile function of one group's training scores, linear
/// between order statistics.
class EmpiricalQuantile {
 public:
  explicit EmpiricalQuantile(std::vector<double> sample);

  /// Quantile level in [0,1] of `score`; scores outside the sample range clamp to 0 or 1.
  double level(double score) const;
  /// Inverse of `level`.
  double value(double level) const;
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// Maps both groups' test scores onto the barycenter of the two group score
/// distributions estimated on `train`. The barycenter quantile function is
/// the group-size-weighted average of the group quantile functions.
/// Only records listed in `indices` are transformed (all records by default).
ScoreSet wasserstein_fair(const ScoreSet& train, const ScoreSet& test);
ScoreSet wasserstein_fair(const ScoreSet& train, const ScoreSet& test, std::span<const std::size_t> indices);

}  // namespace fairpot::baselines
