#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fairpot/datagen.hpp"
#include "fairpot/error.hpp"
#include "fairpot/metrics.hpp"
#include "fairpot/rng.hpp"

using namespace fairpot;
using namespace fairpot::datagen;

TEST_CASE("xoshiro streams are reproducible and distinct") {
  Xoshiro256 a(42, 1), b(42, 1), c(42, 2), d(43, 1);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 8; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
}

TEST_CASE("uniform, normal and bounded draws") {
  Xoshiro256 g(7, 0);
  double sum = 0, sum_sq = 0, usum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = g.uniform();
    CHECK_UNARY(u > 0.0 && u < 1.0);
    usum += u;
    double z = g.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));

  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    auto k = g.below(7);
    REQUIRE(k < 7);
    ++hist[k];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("cohort layout") {
  SyntheticConfig cfg;
  cfg.n_samples = 11;
  cfg.seed = 3;
  auto t = generate_synthetic(cfg);
  CHECK(t.rows() == 11);
  CHECK(t.features.rows == 11);
  CHECK(t.features.cols == 5);
  CHECK(std::count(t.groups.begin(), t.groups.end(), Group::A) == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(t.groups[i] == Group::A);
  CHECK(t.model_a.coefficients.size() == 5);
}

TEST_CASE("cohort is a pure function of its configuration") {
  SyntheticConfig cfg;
  cfg.n_samples = 500;
  cfg.seed = 12;
  auto x = generate_synthetic(cfg);
  auto y = generate_synthetic(cfg);
  CHECK(x.features.values == y.features.values);
  CHECK(x.labels == y.labels);
  cfg.seed = 13;
  auto z = generate_synthetic(cfg);
  CHECK(x.features.values != z.features.values);
}

TEST_CASE("group feature means follow the configuration") {
  SyntheticConfig cfg;
  cfg.n_samples = 20000;
  cfg.seed = 1;
  auto t = generate_synthetic(cfg);
  double sa = 0, sb = 0;
  std::size_t na = 0, nb = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (double v : t.features.row(i)) {
      if (t.groups[i] == Group::A) {
        sa += v;
        ++na;
      } else {
        sb += v;
        ++nb;
      }
    }
  CHECK(sa / na == doctest::Approx(0.8).epsilon(0.02));
  CHECK(std::abs(sb / nb - 0.1) < 0.02);
}

TEST_CASE("intercepts calibrate the mean score") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    auto t = generate_synthetic(cfg);
    CHECK(std::abs(t.model_a.mean_score - 0.3) <= 1e-3);
    CHECK(std::abs(t.model_b.mean_score - 0.1) <= 1e-3);
  }
}

TEST_CASE("configuration validation") {
  SyntheticConfig cfg;
  cfg.target_pos_rate_a = 1.0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
  cfg = {};
  cfg.std_dev = 0.0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
  cfg = {};
  cfg.n_samples = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
}

TEST_CASE("logistic scorer separates a linearly separable set") {
  FeatureMatrix f{6, 1, {-2.0, -1.5, -1.0, 1.0, 1.5, 2.0}};
  std::vector<std::uint8_t> y{0, 0, 0, 1, 1, 1};
  auto m = fit_logistic_scorer(f, y);
  CHECK(m.weights[0] > 0.0);
  auto s = m.score(f);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(s[0] < 0.5);
  CHECK(s[5] > 0.5);

  std::vector<std::uint8_t> ones(6, 1);
  CHECK_THROWS_AS(fit_logistic_scorer(f, ones), DomainError);
}

TEST_CASE("scored cohort carries labels and groups") {
  SyntheticConfig cfg;
  cfg.n_samples = 400;
  cfg.seed = 9;
  auto t = generate_synthetic(cfg);
  auto m = fit_logistic_scorer(t.features, t.labels);
  auto s = score_table(m, t);
  REQUIRE(s.size() == 400);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].label == t.labels[i]);
    CHECK(s[i].group == t.groups[i]);
  }
  std::vector<std::size_t> pick{5, 1, 300};
  auto sub = t.select(pick);
  CHECK(sub.rows() == 3);
  CHECK(sub.features.row(2)[0] == t.features.row(300)[0]);
  CHECK(sub.groups[2] == Group::B);
}

TEST_CASE("the generating model favours group a and the fitted scorer beats chance") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    auto t = generate_synthetic(cfg);
    CHECK(t.model_b.mean_score < t.model_a.mean_score);

    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < t.rows(); ++i) (i % 5 == 4 ? test : train).push_back(i);
    auto fit_rows = t.select(train);
    auto m = fit_logistic_scorer(fit_rows.features, fit_rows.labels);
    CHECK(auc(score_table(m, t.select(test))) > 0.5);
  }
}

TEST_CASE("a scorer without features returns the intercept score") {
  FeatureMatrix f{4, 0, {}};
  std::vector<std::uint8_t> y{1, 0, 0, 0};
  auto m = fit_logistic_scorer(f, y);
  for (double s : m.score(f)) CHECK(s == doctest::Approx(0.25).epsilon(1e-3));
}
