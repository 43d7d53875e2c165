// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairpot/baselines.hpp"
#include "fairpot/datagen.hpp"
#include "fairpot/experiment.hpp"
#include "fairpot/fairpot.hpp"
#include "fairpot/metrics.hpp"
#include "fairpot/ot.hpp"
#include "fairpot/pareto.hpp"
#include "oracles.hpp"

using namespace fairpot;

namespace {

constexpr int kSeeds = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::vector<double> lambda_grid() {
  std::vector<double> l;
  for (int k = 0; k <= 10; ++k) l.push_back(k / 10.0);
  return l;
}

Outcome metric_oracle() {
  Timer t;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + gen() % 200;
    int levels = 1 + static_cast<int>(gen() % 50);
    auto recs = oracle::random_records(gen, n, levels);
    ScoreSet s(recs);
    double alpha = std::max(alpha_dist(gen), 1e-3);
    auto region = top_alpha_region(s, alpha);
    auto in = oracle::top_members(recs, alpha);
    auto member = [&](std::size_t i) { return bool(in[i]); };
    bool ok = auc(s) == oracle::auc(recs) &&
              xauc(s, Group::A, Group::B) == oracle::xauc(recs, Group::A, Group::B) &&
              xauc(s, Group::B, Group::A) == oracle::xauc(recs, Group::B, Group::A) &&
              pauc(s, region) == oracle::pauc(recs, alpha) &&
              pxauc(s, region, Group::A, Group::B) ==
                  oracle::pair_fraction(recs, member, Group::A, Group::B, 0.0, 0.0) &&
              pxauc(s, region, Group::B, Group::A) ==
                  oracle::pair_fraction(recs, member, Group::B, Group::A, 0.0, 0.0);
    if (!ok) return fail("mismatch on trial " + std::to_string(trial));
  }
  double secs = t.seconds();
  if (secs >= 10.0) return fail("took " + fmt(secs) + " s");
  return {true, "500 sets agree exactly in " + fmt(secs) + " s"};
}

Outcome ot_exactness() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_gap = 0.0, worst_marginal = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + gen() % 12, m = 1 + gen() % 12;
    std::vector<double> x(n), y(m);
    for (auto& v : x) v = u(gen);
    for (auto& v : y) v = trial % 3 == 0 ? std::round(u(gen) * 5) / 5 : u(gen);
    auto plan = ot::solve_ot_1d(ot::EmpiricalMeasure::uniform(x), ot::EmpiricalMeasure::uniform(y));
    std::vector<double> cost;
    for (double a : x)
      for (double b : y) cost.push_back((a - b) * (a - b));
    double lp = oracle::transport_lp(cost, std::vector<double>(n, 1.0 / n), std::vector<double>(m, 1.0 / m));
    worst_gap = std::max(worst_gap, std::abs(plan.cost(x, y) - lp));
    for (double r : plan.row_sums()) worst_marginal = std::max(worst_marginal, std::abs(r - 1.0 / n));
    for (double c : plan.column_sums()) worst_marginal = std::max(worst_marginal, std::abs(c - 1.0 / m));
  }
  std::string detail = "max |cost - LP| = " + fmt(worst_gap) + ", max marginal error = " + fmt(worst_marginal);
  return {worst_gap <= 1e-9 && worst_marginal <= 1e-10, detail};
}

Outcome lambda_zero_identity() {
  std::vector<double> zero{0.0};
  int checked = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(3000, 0.8, static_cast<std::uint64_t>(seed));
    for (auto mode : {SweepMode::Global, SweepMode::Partial})
      for (auto dir : {Direction::BToA, Direction::AToB}) {
        SweepSettings s{mode, 0.3, dir, 1};
        auto region = evaluation_region(split.test, s);
        auto base = evaluate(split.test, region, mode);
        auto p = sweep(split.train, split.test, zero, s);
        auto moved = transform_test(fit_fairpot(split.train, s), split.test, region, 0.0);
        if (p[0].accuracy != base.first || p[0].disparity != base.second)
          return fail("metrics differ at seed " + std::to_string(seed));
        if (moved.records() != split.test.records()) return fail("scores differ at seed " + std::to_string(seed));
        ++checked;
      }
  }
  return {true, std::to_string(checked) + " seed/mode/direction combinations bit-identical"};
}

Outcome convex_hull() {
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(3000, 0.8, static_cast<std::uint64_t>(seed));
    auto a = split.train.group_scores(Group::A);
    auto b = split.train.group_scores(Group::B);
    auto plan = fit_transport(a, b);
    auto phi = apply_phi(b, plan, a, 1.0);
    auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    for (double z : phi.transported_scores)
      if (z < *lo || z > *hi) return fail("score " + fmt(z) + " outside hull at seed " + std::to_string(seed));
  }
  return {true, "all transported training scores inside [min, max] of group a on 20 seeds"};
}

Outcome disparity_reduction() {
  Timer t;
  io::ExperimentConfig config;
  double at0 = 0.0, at1 = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(config.n_samples, config.split_ratio, static_cast<std::uint64_t>(seed));
    auto pts = experiment::run_method(split.train, split.test, config);
    at0 += pts.front().disparity / kSeeds;
    at1 += pts.back().disparity / kSeeds;
  }
  double secs = t.seconds();
  std::string detail = "mean disparity " + fmt(at0) + " -> " + fmt(at1) + " in " + fmt(secs) + " s";
  return {at1 < at0 && secs < 60.0, detail};
}

Outcome alpha_one_reduction() {
  auto lambdas = lambda_grid();
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(3000, 0.8, static_cast<std::uint64_t>(seed));
    for (auto dir : {Direction::BToA, Direction::AToB}) {
      auto g = sweep(split.train, split.test, lambdas, {SweepMode::Global, 1.0, dir, 1});
      auto p = sweep(split.train, split.test, lambdas, {SweepMode::Partial, 1.0, dir, 1});
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        if (g[k].accuracy != p[k].accuracy || g[k].disparity != p[k].disparity)
          return fail("lambda " + fmt(lambdas[k]) + " differs at seed " + std::to_string(seed));
    }
  }
  return {true, "11 lambdas x 2 directions x 20 seeds identical"};
}

Outcome knot_consistency() {
  auto lambdas = lambda_grid();
  std::size_t knots = 0, clamped = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(3000, 0.8, static_cast<std::uint64_t>(seed));
    for (auto mode : {SweepMode::Global, SweepMode::Partial}) {
      auto fitted = fit_fairpot(split.train, {mode, 0.3, Direction::BToA, 1});
      auto lo = *std::min_element(fitted.moving_train.begin(), fitted.moving_train.end());
      auto hi = *std::max_element(fitted.moving_train.begin(), fitted.moving_train.end());
      for (double l : lambdas) {
        auto phi = apply_phi_projected(fitted.moving_train, fitted.projection, l);
        auto map = build_score_map(fitted.moving_train, phi.transported_scores);
        if (apply_psi(map, fitted.moving_train) != phi.transported_scores)
          return fail("knot mismatch at seed " + std::to_string(seed) + ", lambda " + fmt(l));
        const auto& k = map.knots();
        std::vector<double> outside{lo - 0.05, lo - 1e-9, hi + 1e-9, hi + 0.05, -1.0, 2.0};
        for (double q : outside) {
          // the all-identity map at lambda 0 must leave every score untouched
          double expect = map.is_identity() ? q : q < lo ? k.front().transported : k.back().transported;
          if (map(q) != expect) return fail("extrapolation at " + fmt(q) + " seed " + std::to_string(seed));
        }
        if (l == 0.0 && !map.is_identity()) return fail("lambda 0 map is not the identity");
        if (l > 0.0) ++clamped;
        knots += k.size();
      }
    }
  }
  return {true, std::to_string(knots) + " knots reproduced exactly; boundary queries clamp on " +
                    std::to_string(clamped) + " maps with lambda > 0, identity at lambda 0"};
}

Outcome pareto_oracle() {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> coord(0, 9);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  const char* tags[] = {"fairpot", "post-logit", "wasserstein", "unadjusted"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = gen() % 51;
    bool coarse = trial % 2 == 0;
    std::vector<TradeoffPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<double> l;
      if (gen() % 4 != 0) l = static_cast<double>(gen() % 11) / 10.0;
      double d = coarse ? coord(gen) / 9.0 : fine(gen);
      double a = coarse ? coord(gen) / 9.0 : fine(gen);
      pts.push_back({l, a, d, tags[gen() % 4], static_cast<int>(gen() % 20)});
    }
    auto front = pareto_frontier(pts);
    if (front != oracle::frontier(pts)) return fail("oracle mismatch on trial " + std::to_string(trial));
    if (pareto_frontier(front) != front) return fail("not idempotent on trial " + std::to_string(trial));
    auto shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    if (pareto_frontier(shuffled) != front) return fail("order dependent on trial " + std::to_string(trial));
  }
  return {true, "1000 point sets match the dominance oracle; idempotent and order independent"};
}

Outcome baseline_alignment() {
  auto w1 = [](const ScoreSet& s) {
    return ot::wasserstein1_distance(ot::EmpiricalMeasure::uniform(s.group_scores(Group::A)),
                                     ot::EmpiricalMeasure::uniform(s.group_scores(Group::B)));
  };
  auto within = [](const ScoreSet& s, Group g) {
    auto idx = s.group_indices(g);
    return auc(s.subset(idx));
  };
  double before = 0.0, after = 0.0;
  std::string not_reduced;
  auto grid = baselines::default_post_logit_grid();
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto split = experiment::synthesize_scores(3000, 0.8, static_cast<std::uint64_t>(seed));
    auto fair = baselines::wasserstein_fair(split.train, split.test);
    double pre = w1(split.test), post = w1(fair);
    if (!(post < pre))
      not_reduced += " seed " + std::to_string(seed) + " (" + fmt(pre) + " -> " + fmt(post) + ")";
    before += pre / kSeeds;
    after += post / kSeeds;

    auto params = baselines::fit_post_logit(split.train, grid);
    auto rescaled = baselines::apply_post_logit(params, split.test);
    for (Group g : {Group::A, Group::B})
      if (within(rescaled, g) != within(split.test, g))
        return fail("post-logit changed within-group AUC at seed " + std::to_string(seed));
  }
  std::string detail = "mean test W1 " + fmt(before) + " -> " + fmt(after) + "; post-logit within-group AUC unchanged";
  if (!not_reduced.empty()) return fail(detail + "; W1 not reduced at" + not_reduced);
  return {true, detail};
}

Outcome calibration() {
  double worst = 0.0;
  std::string where;
  for (int seed = 0; seed < kSeeds; ++seed) {
    datagen::SyntheticConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    auto t = datagen::generate_synthetic(cfg);
    for (Group g : {Group::A, Group::B}) {
      std::size_t n = 0, pos = 0;
      for (std::size_t i = 0; i < t.rows(); ++i)
        if (t.groups[i] == g) {
          ++n;
          pos += t.labels[i];
        }
      double rate = static_cast<double>(pos) / static_cast<double>(n);
      double target = g == Group::A ? cfg.target_pos_rate_a : cfg.target_pos_rate_b;
      if (std::abs(rate - target) > worst) {
        worst = std::abs(rate - target);
        where = std::string("group ") + to_char(g) + " seed " + std::to_string(seed);
      }
    }
  }
  return {worst <= 0.03, "largest deviation " + fmt(worst) + " (" + where + ")"};
}

Outcome performance() {
  // 3000 training rows and 3000 test rows from independent cohorts
  auto train3000 = experiment::synthesize_scores(3750, 0.8, 1).train;
  auto test3000 = experiment::synthesize_scores(3750, 0.8, 2).train;
  auto lambdas = lambda_grid();
  Timer t;
  auto pts = sweep(train3000, test3000, lambdas, {});
  double secs = t.seconds();
  return {pts.size() == 11 && secs < 5.0, "11-lambda sweep on 3000 train / 3000 test rows in " + fmt(secs) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric estimators match pair enumeration", metric_oracle},
      {"1-D transport matches the LP optimum", ot_exactness},
      {"lambda 0 reproduces the unadjusted metrics", lambda_zero_identity},
      {"lambda 1 stays in the reference score hull", convex_hull},
      {"full transport lowers mean disparity", disparity_reduction},
      {"partial mode at alpha 1 equals global mode", alpha_one_reduction},
      {"score map reproduces training transport", knot_consistency},
      {"frontier matches the dominance oracle", pareto_oracle},
      {"baselines align groups and keep rankings", baseline_alignment},
      {"synthetic positive rates are calibrated", calibration},
      {"single sweep runs within the time budget", performance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("[%s] AC%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
