#include "fairpot/fairpot.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "fairpot/error.hpp"

namespace fairpot {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
}

std::string group_name(Group g) { return std::string("group ") + to_char(g); }

}  // namespace

ScoreMap::ScoreMap(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw DomainError("score map needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i > 0 && !(knots_[i - 1].original < knots_[i].original))
      throw DomainError("score map knots must be strictly increasing");
    if (knots_[i].transported != knots_[i].original) identity_ = false;
  }
}

double ScoreMap::operator()(double score) const {
  if (identity_) return score;
  auto upper = std::lower_bound(knots_.begin(), knots_.end(), score,
                                [](const Knot& k, double s) { return k.original < s; });
  if (upper == knots_.end()) return knots_.back().transported;
  if (upper->original == score) return upper->transported;
  if (upper == knots_.begin()) return knots_.front().transported;
  auto lower = std::prev(upper);
  return upper->transported + (lower->transported - upper->transported) * (score - upper->original) /
                                  (lower->original - upper->original);
}

ot::TransportPlan fit_transport(std::span<const double> reference_train, std::span<const double> moving_train,
                                Group moving) {
  if (moving_train.empty()) throw DomainError(group_name(moving) + " has no training scores to transport");
  if (reference_train.empty()) throw DomainError(group_name(other(moving)) + " has no training scores to transport onto");
  return ot::solve_ot_1d(ot::EmpiricalMeasure::uniform({moving_train.begin(), moving_train.end()}),
                         ot::EmpiricalMeasure::uniform({reference_train.begin(), reference_train.end()}));
}

PartialTransportResult apply_phi_projected(std::span<const double> moving_train, std::span<const double> projection,
                                           double lambda) {
  check_lambda(lambda);
  if (projection.size() != moving_train.size()) throw DomainError("projection does not match the moving scores");

  PartialTransportResult out;
  out.lambda = lambda;
  out.n_lambda = std::min(guarded_ceil(lambda * static_cast<double>(moving_train.size())), moving_train.size());
  out.transported_scores.assign(moving_train.begin(), moving_train.end());

  std::vector<std::size_t> order(moving_train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return moving_train[l] > moving_train[r]; });
  order.resize(out.n_lambda);
  std::sort(order.begin(), order.end());
  for (auto i : order) out.transported_scores[i] = projection[i];
  out.transported_indices = std::move(order);
  return out;
}

PartialTransportResult apply_phi(std::span<const double> moving_train, const ot::TransportPlan& plan,
                                 std::span<const double> reference_train, double lambda) {
  check_lambda(lambda);
  if (plan.source_n() != moving_train.size() || plan.target_n() != reference_train.size())
    throw DomainError("transport plan was fitted on different score vectors");
  return apply_phi_projected(moving_train, ot::barycentric_projection(plan, reference_train), lambda);
}

ScoreMap build_score_map(std::span<const double> original_train, std::span<const double> transported_train) {
  if (original_train.size() != transported_train.size())
    throw DomainError("original and transported training scores differ in length");
  if (original_train.empty()) throw DomainError("score map needs training scores");

  std::vector<std::size_t> order(original_train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return original_train[l] < original_train[r]; });

  std::vector<ScoreMap::Knot> knots;
  for (std::size_t k = 0; k < order.size();) {
    double x = original_train[order[k]];
    double sum = 0.0;
    std::size_t count = 0;
    for (; k < order.size() && original_train[order[k]] == x; ++k, ++count) sum += transported_train[order[k]];
    knots.push_back({x, count == 1 ? sum : sum / static_cast<double>(count)});
  }
  return ScoreMap(std::move(knots));
}

std::vector<double> apply_psi(const ScoreMap& map, std::span<const double> moving_test) {
  std::vector<double> out;
  out.reserve(moving_test.size());
  for (double s : moving_test) out.push_back(map(s));
  return out;
}

PartialTransportResult apply_phi_alpha(std::span<const double> moving_alpha_train,
                                       std::span<const double> reference_alpha_train, double lambda) {
  if (moving_alpha_train.empty() || reference_alpha_train.empty())
    throw DomainError("top-alpha region lacks one of the groups; no valid transport");
  auto plan = fit_transport(reference_alpha_train, moving_alpha_train);
  return apply_phi(moving_alpha_train, plan, reference_alpha_train, lambda);
}

std::vector<double> apply_psi_alpha(const ScoreMap& map, std::span<const double> moving_alpha_test) {
  return apply_psi(map, moving_alpha_test);
}

FittedTransport fit_fairpot(const ScoreSet& train, const SweepSettings& settings) {
  const Group moving = moving_group(settings.direction);
  std::vector<double> moving_train, reference_train;
  if (settings.mode == SweepMode::Global) {
    moving_train = train.group_scores(moving);
    reference_train = train.group_scores(other(moving));
  } else {
    auto region = top_alpha_region(train, settings.alpha);
    for (auto i : region.member_indices)
      (train[i].group == moving ? moving_train : reference_train).push_back(train[i].score);
    if (moving_train.empty() || reference_train.empty())
      throw DomainError("training top-alpha region lacks " +
                        group_name(moving_train.empty() ? moving : other(moving)) + "; no valid transport");
  }
  auto plan = fit_transport(reference_train, moving_train, moving);
  auto projection = ot::barycentric_projection(plan, reference_train);
  return {moving, std::move(moving_train), std::move(reference_train), std::move(plan), std::move(projection)};
}

TopAlphaRegion evaluation_region(const ScoreSet& test, const SweepSettings& settings) {
  return top_alpha_region(test, settings.mode == SweepMode::Global ? 1.0 : settings.alpha);
}

ScoreSet transform_test(const FittedTransport& fitted, const ScoreSet& test, const TopAlphaRegion& region,
                        double lambda) {
  auto phi = apply_phi_projected(fitted.moving_train, fitted.projection, lambda);
  auto map = build_score_map(fitted.moving_train, phi.transported_scores);

  std::vector<std::size_t> indices;
  std::vector<double> scores;
  for (auto i : region.member_indices) {
    if (test[i].group != fitted.moving) continue;
    indices.push_back(i);
    scores.push_back(test[i].score);
  }
  auto mapped = apply_psi(map, scores);
  return test.with_scores(indices, mapped);
}

std::pair<double, double> evaluate(const ScoreSet& test, const TopAlphaRegion& region, SweepMode mode) {
  if (mode == SweepMode::Global) return {auc(test), xauc_disparity(test)};
  return {pauc(test, region), pxauc_disparity(test, region)};
}

std::vector<TradeoffPoint> sweep(const ScoreSet& train, const ScoreSet& test, std::span<const double> lambdas,
                                 const SweepSettings& settings) {
  for (Group g : {Group::A, Group::B}) {
    if (!train.has_group(g)) throw DomainError("training scores lack " + group_name(g));
    if (!test.has_group(g)) throw DomainError("test scores lack " + group_name(g));
  }
  for (double l : lambdas) check_lambda(l);

  const auto fitted = fit_fairpot(train, settings);
  const auto region = evaluation_region(test, settings);

  std::vector<TradeoffPoint> points(lambdas.size());
  auto run = [&](std::size_t k) {
    auto transformed = transform_test(fitted, test, region, lambdas[k]);
    auto [accuracy, disparity] = evaluate(transformed, region, settings.mode);
    points[k] = {lambdas[k], accuracy, disparity, "fairpot", 0};
  };

  const std::size_t workers = std::clamp<std::size_t>(settings.threads, 1, std::max<std::size_t>(lambdas.size(), 1));
  if (workers == 1) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) run(k);
    return points;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < lambdas.size(); k += workers) run(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return points;
}

}  // namespace fairpot
