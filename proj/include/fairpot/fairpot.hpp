#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fairpot/metrics.hpp"
#include "fairpot/ot.hpp"
#include "fairpot/pareto.hpp"

namespace fairpot {

/// Outcome of moving the top-lambda share of one group's training scores.
struct PartialTransportResult {
  double lambda = 0.0;
  std::vector<double> transported_scores;       // aligned with the input scores
  std::vector<std::size_t> transported_indices;  // ascending input index
  std::size_t n_lambda = 0;                      // guarded ceil(lambda * n)
};

/// Piecewise-linear map from original to transported training scores.
///
/// Knots are sorted by original score; duplicate originals collapse into one
/// knot carrying the mean transported value. Queries between knots use linear
/// interpolation and queries outside the knot range take the boundary knot's
/// transported value. A map whose knots all satisfy transported == original
/// is the identity everywhere, including outside the knot range.
class ScoreMap {
 public:
  struct Knot {
    double original;
    double transported;
  };

  explicit ScoreMap(std::vector<Knot> knots);

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  bool is_identity() const noexcept { return identity_; }
  double operator()(double score) const;

 private:
  std::vector<Knot> knots_;
  bool identity_ = true;
};

/// Optimal coupling from the moving group's training scores (rows) onto the
/// reference group's (columns). `moving` names the moving group in errors.
ot::TransportPlan fit_transport(std::span<const double> reference_train, std::span<const double> moving_train,
                                Group moving = Group::B);

/// Replaces the ceil(lambda * n) highest moving-group scores with their
/// barycentric projection; ties at the cut go to the lower index.
PartialTransportResult apply_phi(std::span<const double> moving_train, const ot::TransportPlan& plan,
                                 std::span<const double> reference_train, double lambda);

/// Same as above with the barycentric projection of every row precomputed.
PartialTransportResult apply_phi_projected(std::span<const double> moving_train,
                                           std::span<const double> projection, double lambda);

ScoreMap build_score_map(std::span<const double> original_train, std::span<const double> transported_train);

std::vector<double> apply_psi(const ScoreMap& map, std::span<const double> moving_test);

/// Fits the coupling on the top-alpha subsets and applies the partial transport.
PartialTransportResult apply_phi_alpha(std::span<const double> moving_alpha_train,
                                       std::span<const double> reference_alpha_train, double lambda);

std::vector<double> apply_psi_alpha(const ScoreMap& map, std::span<const double> moving_alpha_test);

enum class SweepMode { Global, Partial };
enum class Direction { BToA, AToB };

constexpr Group moving_group(Direction d) noexcept { return d == Direction::BToA ? Group::B : Group::A; }

struct SweepSettings {
  SweepMode mode = SweepMode::Global;
  double alpha = 1.0;  // used in partial mode only
  Direction direction = Direction::BToA;
  std::size_t threads = 1;
};

/// Training-side state shared by every lambda of a sweep.
struct FittedTransport {
  Group moving = Group::B;
  std::vector<double> moving_train;  // record order; top-alpha members only in partial mode
  std::vector<double> reference_train;
  ot::TransportPlan plan;
  std::vector<double> projection;  // barycentric image of every moving_train score
};

FittedTransport fit_fairpot(const ScoreSet& train, const SweepSettings& settings);

/// Test records eligible for transport and evaluation: the whole set in
/// global mode, the pre-transport top-alpha region in partial mode.
TopAlphaRegion evaluation_region(const ScoreSet& test, const SweepSettings& settings);

/// Test set after mapping the moving group's eligible scores through the
/// lambda-specific score map. Every other record is left untouched.
ScoreSet transform_test(const FittedTransport& fitted, const ScoreSet& test, const TopAlphaRegion& region,
                        double lambda);

/// (accuracy, disparity): (AUC, xAUC gap) in global mode, (pAUC, pxAUC gap)
/// over the fixed region in partial mode.
std::pair<double, double> evaluate(const ScoreSet& test, const TopAlphaRegion& region, SweepMode mode);

/// One trade-off point per lambda, in input order. The result does not depend
/// on `settings.threads`.
std::vector<TradeoffPoint> sweep(const ScoreSet& train, const ScoreSet& test, std::span<const double> lambdas,
                                 const SweepSettings& settings);

}  // namespace fairpot
