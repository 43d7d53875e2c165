#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairpot/metrics.hpp"

namespace fairpot::datagen {

struct SyntheticConfig {
  std::size_t n_samples = 3000;
  std::size_t n_features = 5;
  double mean_a = 0.8;
  double mean_b = 0.1;
  double std_dev = 1.0;
  double target_pos_rate_a = 0.3;
  double target_pos_rate_b = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Row-major dense feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

/// The logistic model that generated one group's labels.
struct GroupModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double mean_score = 0.0;  // mean sigmoid score at the calibrated intercept
};

struct SyntheticTable {
  FeatureMatrix features;
  std::vector<std::uint8_t> labels;
  std::vector<Group> groups;
  GroupModel model_a;
  GroupModel model_b;

  std::size_t rows() const noexcept { return labels.size(); }
  /// Copy holding only `indices`, in that order.
  SyntheticTable select(std::span<const std::size_t> indices) const;
};

/// Two-group cohort: group a takes rows [0, ceil(n/2)), group b the rest.
///
/// Features are i.i.d. N(mean_g, std_dev^2). Each group gets its own logistic
/// model with N(0,1) coefficients and an intercept bisected until the mean
/// sigmoid score is within 1e-3 of the group's target positive rate. Labels
/// are Bernoulli draws from those scores, one uniform per row.
SyntheticTable generate_synthetic(const SyntheticConfig& cfg);

/// Pooled logistic regression standing in for the base classifier.
struct LogisticScorer {
  std::vector<double> weights;
  double intercept = 0.0;

  std::vector<double> score(const FeatureMatrix& features) const;
};

/// Full-batch gradient descent on the mean log-loss: 500 iterations, step
/// 0.1, L2 penalty 1e-4 on the weights (not the intercept).
LogisticScorer fit_logistic_scorer(const FeatureMatrix& features, std::span<const std::uint8_t> labels);

/// Scores `table` with `scorer` and pairs them with labels and groups.
ScoreSet score_table(const LogisticScorer& scorer, const SyntheticTable& table);

}  // namespace fairpot::datagen
