#include "fairpot/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "fairpot/error.hpp"
#include "fairpot/rng.hpp"

namespace fairpot::datagen {

namespace {

constexpr double kCalibrationTolerance = 1e-3;
constexpr int kGradientSteps = 500;
constexpr double kStepSize = 0.1;
constexpr double kL2 = 1e-4;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double linear(std::span<const double> x, const std::vector<double>& w) {
  return std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
}

double mean_score(const std::vector<double>& logits, double intercept) {
  double sum = 0.0;
  for (double z : logits) sum += sigmoid(z + intercept);
  return sum / static_cast<double>(logits.size());
}

// Bisection on the intercept; the mean score is increasing in it.
std::pair<double, double> calibrate_intercept(const std::vector<double>& logits, double target) {
  double lo = -1.0, hi = 1.0;
  while (mean_score(logits, lo) > target) lo *= 2.0;
  while (mean_score(logits, hi) < target) hi *= 2.0;
  double mid = 0.5 * (lo + hi);
  double mean = mean_score(logits, mid);
  for (int iter = 0; iter < 200 && std::abs(mean - target) > kCalibrationTolerance; ++iter) {
    (mean < target ? lo : hi) = mid;
    mid = 0.5 * (lo + hi);
    mean = mean_score(logits, mid);
  }
  return {mid, mean};
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_samples < 2) throw ValidationError("n_samples must be at least 2");
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) throw ValidationError("std_dev must be positive");
  for (double rate : {target_pos_rate_a, target_pos_rate_b})
    if (!(rate > 0.0 && rate < 1.0)) throw ValidationError("target positive rates must lie in (0, 1)");
  if (!std::isfinite(mean_a) || !std::isfinite(mean_b)) throw ValidationError("group means must be finite");
}

SyntheticTable SyntheticTable::select(std::span<const std::size_t> indices) const {
  SyntheticTable out;
  out.model_a = model_a;
  out.model_b = model_b;
  out.features.rows = indices.size();
  out.features.cols = features.cols;
  out.features.values.reserve(indices.size() * features.cols);
  for (auto i : indices) {
    auto r = features.row(i);
    out.features.values.insert(out.features.values.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
    out.groups.push_back(groups[i]);
  }
  return out;
}

SyntheticTable generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  const std::size_t n_a = (cfg.n_samples + 1) / 2;
  const std::size_t n = cfg.n_samples;
  const std::size_t d = cfg.n_features;

  SyntheticTable t;
  t.features.rows = n;
  t.features.cols = d;
  t.features.values.resize(n * d);
  t.groups.resize(n);
  t.labels.resize(n);

  Xoshiro256 rng_a(cfg.seed, stream::kFeaturesA);
  Xoshiro256 rng_b(cfg.seed, stream::kFeaturesB);
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_a = i < n_a;
    t.groups[i] = in_a ? Group::A : Group::B;
    auto& rng = in_a ? rng_a : rng_b;
    const double mean = in_a ? cfg.mean_a : cfg.mean_b;
    for (std::size_t k = 0; k < d; ++k) t.features.values[i * d + k] = mean + cfg.std_dev * rng.normal();
  }

  Xoshiro256 rng_coef(cfg.seed, stream::kCoefficients);
  for (auto* model : {&t.model_a, &t.model_b}) {
    model->coefficients.resize(d);
    for (auto& c : model->coefficients) c = rng_coef.normal();
  }

  std::vector<double> probability(n);
  for (Group g : {Group::A, Group::B}) {
    auto& model = g == Group::A ? t.model_a : t.model_b;
    const std::size_t begin = g == Group::A ? 0 : n_a;
    const std::size_t end = g == Group::A ? n_a : n;
    if (begin == end) continue;
    std::vector<double> logits;
    for (std::size_t i = begin; i < end; ++i) logits.push_back(linear(t.features.row(i), model.coefficients));
    const double target = g == Group::A ? cfg.target_pos_rate_a : cfg.target_pos_rate_b;
    std::tie(model.intercept, model.mean_score) = calibrate_intercept(logits, target);
    for (std::size_t i = begin; i < end; ++i) probability[i] = sigmoid(logits[i - begin] + model.intercept);
  }

  Xoshiro256 rng_label(cfg.seed, stream::kLabels);
  for (std::size_t i = 0; i < n; ++i) t.labels[i] = rng_label.uniform() < probability[i] ? 1 : 0;
  return t;
}

std::vector<double> LogisticScorer::score(const FeatureMatrix& features) const {
  if (features.cols != weights.size())
    throw DomainError("scorer expects " + std::to_string(weights.size()) + " features, got " +
                      std::to_string(features.cols));
  std::vector<double> out(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) out[i] = sigmoid(linear(features.row(i), weights) + intercept);
  return out;
}

LogisticScorer fit_logistic_scorer(const FeatureMatrix& features, std::span<const std::uint8_t> labels) {
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  if (labels.size() != n) throw DomainError("label count does not match feature rows");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  if (positives == 0 || positives == n) throw DomainError("logistic scorer needs both labels in the training data");

  LogisticScorer m{std::vector<double>(d, 0.0), 0.0};
  std::vector<double> grad(d);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int step = 0; step < kGradientSteps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = features.row(i);
      double residual = sigmoid(linear(x, m.weights) + m.intercept) - labels[i];
      for (std::size_t k = 0; k < d; ++k) grad[k] += residual * x[k];
      grad_b += residual;
    }
    for (std::size_t k = 0; k < d; ++k) m.weights[k] -= kStepSize * (grad[k] * inv_n + kL2 * m.weights[k]);
    m.intercept -= kStepSize * grad_b * inv_n;
  }
  return m;
}

ScoreSet score_table(const LogisticScorer& scorer, const SyntheticTable& table) {
  auto scores = scorer.score(table.features);
  std::vector<ScoredRecord> records(table.rows());
  for (std::size_t i = 0; i < records.size(); ++i) records[i] = {scores[i], table.labels[i], table.groups[i]};
  return ScoreSet(std::move(records));
}

}  // namespace fairpot::datagen
