#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairpot::ot {

/// A discrete probability measure on the real line.
class EmpiricalMeasure {
 public:
  /// Uniform weights 1/n on `support`.
  static EmpiricalMeasure uniform(std::vector<double> support);

  /// Explicit weights; they must be non-negative and sum to 1 within 1e-12.
  EmpiricalMeasure(std::vector<double> support, std::vector<double> weights);

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return support_.size(); }
  bool is_uniform() const noexcept { return uniform_; }

 private:
  EmpiricalMeasure() = default;

  std::vector<double> support_;
  std::vector<double> weights_;
  bool uniform_ = false;
};

struct PlanEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

/// A coupling between a source measure (rows) and a target measure (columns),
/// stored as its non-zero entries. Indices refer to the original, unsorted
/// order of each measure's support.
class TransportPlan {
 public:
  TransportPlan(std::size_t source_n, std::size_t target_n, std::vector<PlanEntry> entries);

  std::size_t source_n() const noexcept { return source_n_; }
  std::size_t target_n() const noexcept { return target_n_; }
  const std::vector<PlanEntry>& entries() const noexcept { return entries_; }

  /// Row-major source_n x target_n matrix.
  std::vector<double> dense() const;
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;

  /// Sum of mass * (source - target)^2.
  double cost(std::span<const double> source_support, std::span<const double> target_support) const;

 private:
  std::size_t source_n_;
  std::size_t target_n_;
  std::vector<PlanEntry> entries_;
};

/// Optimal coupling for the squared-distance cost.
///
/// Both supports are sorted ascending and mass is filled north-west-corner
/// style, which is optimal for any convex cost on the line. The result has
/// at most n + m - 1 non-zero entries. Uniform measures are handled in exact
/// integer units of 1/(n*m); general weights use floating-point bookkeeping
/// with residuals below 1e-12 snapped to zero.
TransportPlan solve_ot_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target);

/// Maps each source point to the mass-weighted mean of the target points it
/// is coupled with. For uniform source weights this is n * sum_j gamma_ij z'_j.
/// Rows coupled with a single target return that target exactly; other rows
/// are clamped to the range of their coupled targets.
std::vector<double> barycentric_projection(const TransportPlan& plan, std::span<const double> target_support);

/// Exact 1-Wasserstein distance, the integral of |F_p - F_q|.
double wasserstein1_distance(const EmpiricalMeasure& p, const EmpiricalMeasure& q);

}  // namespace fairpot::ot
