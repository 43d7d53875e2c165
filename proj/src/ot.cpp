#include "fairpot/ot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fairpot/error.hpp"

namespace fairpot::ot {

namespace {

constexpr double kResidualSnap = 1e-12;

void check_support(const std::vector<double>& support) {
  if (support.empty()) throw DomainError("empirical measure has empty support");
  for (double z : support)
    if (!std::isfinite(z)) throw DomainError("empirical measure support must be finite");
}

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
  return order;
}

// Monotone fill with every source row carrying m units and every target
// column n units; one unit is 1/(n*m).
std::vector<PlanEntry> fill_uniform(const std::vector<std::size_t>& src, const std::vector<std::size_t>& tgt) {
  const std::uint64_t n = src.size();
  const std::uint64_t m = tgt.size();
  const double unit_mass = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  std::vector<PlanEntry> entries;
  entries.reserve(n + m - 1);
  std::uint64_t row_left = m;
  std::uint64_t col_left = n;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    std::uint64_t moved = std::min(row_left, col_left);
    double mass = moved == m   ? 1.0 / static_cast<double>(n)
                  : moved == n ? 1.0 / static_cast<double>(m)
                               : static_cast<double>(moved) * unit_mass;
    entries.push_back({src[i], tgt[j], mass});
    row_left -= moved;
    col_left -= moved;
    if (row_left == 0) {
      ++i;
      row_left = m;
    }
    if (col_left == 0) {
      ++j;
      col_left = n;
    }
  }
  return entries;
}

std::vector<PlanEntry> fill_weighted(const EmpiricalMeasure& source, const std::vector<std::size_t>& src,
                                     const EmpiricalMeasure& target, const std::vector<std::size_t>& tgt) {
  std::vector<PlanEntry> entries;
  std::size_t i = 0, j = 0;
  double row_left = source.weights()[src[0]];
  double col_left = target.weights()[tgt[0]];
  auto next_row = [&] {
    if (++i < src.size()) row_left = source.weights()[src[i]];
  };
  auto next_col = [&] {
    if (++j < tgt.size()) col_left = target.weights()[tgt[j]];
  };
  while (i < src.size() && j < tgt.size()) {
    if (row_left <= kResidualSnap) {
      next_row();
      continue;
    }
    if (col_left <= kResidualSnap) {
      next_col();
      continue;
    }
    double moved = std::min(row_left, col_left);
    entries.push_back({src[i], tgt[j], moved});
    row_left -= moved;
    col_left -= moved;
    if (row_left <= kResidualSnap) next_row();
    if (col_left <= kResidualSnap) next_col();
  }
  return entries;
}

}  // namespace

EmpiricalMeasure EmpiricalMeasure::uniform(std::vector<double> support) {
  check_support(support);
  EmpiricalMeasure m;
  m.weights_.assign(support.size(), 1.0 / static_cast<double>(support.size()));
  m.support_ = std::move(support);
  m.uniform_ = true;
  return m;
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  check_support(support_);
  if (weights_.size() != support_.size()) throw DomainError("support and weights differ in length");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
  uniform_ = std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

TransportPlan::TransportPlan(std::size_t source_n, std::size_t target_n, std::vector<PlanEntry> entries)
    : source_n_(source_n), target_n_(target_n), entries_(std::move(entries)) {
  for (const auto& e : entries_)
    if (e.source >= source_n_ || e.target >= target_n_ || !(e.mass >= 0.0))
      throw DomainError("transport plan entry out of range");
}

std::vector<double> TransportPlan::dense() const {
  std::vector<double> out(source_n_ * target_n_, 0.0);
  for (const auto& e : entries_) out[e.source * target_n_ + e.target] += e.mass;
  return out;
}

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(source_n_, 0.0);
  for (const auto& e : entries_) out[e.source] += e.mass;
  return out;
}

std::vector<double> TransportPlan::column_sums() const {
  std::vector<double> out(target_n_, 0.0);
  for (const auto& e : entries_) out[e.target] += e.mass;
  return out;
}

double TransportPlan::cost(std::span<const double> source_support, std::span<const double> target_support) const {
  if (source_support.size() != source_n_ || target_support.size() != target_n_)
    throw DomainError("support sizes do not match the transport plan");
  double total = 0.0;
  for (const auto& e : entries_) {
    double d = source_support[e.source] - target_support[e.target];
    total += e.mass * d * d;
  }
  return total;
}

TransportPlan solve_ot_1d(const EmpiricalMeasure& source, const EmpiricalMeasure& target) {
  if (source.size() == 0 || target.size() == 0) throw DomainError("optimal transport needs non-empty measures");
  auto src = ascending_order(source.support());
  auto tgt = ascending_order(target.support());
  auto entries = source.is_uniform() && target.is_uniform() ? fill_uniform(src, tgt)
                                                            : fill_weighted(source, src, target, tgt);
  return TransportPlan(source.size(), target.size(), std::move(entries));
}

std::vector<double> barycentric_projection(const TransportPlan& plan, std::span<const double> target_support) {
  if (target_support.size() != plan.target_n())
    throw DomainError("target support has " + std::to_string(target_support.size()) +
                      " points but the plan has " + std::to_string(plan.target_n()) + " columns");

  const auto n = plan.source_n();
  std::vector<double> weighted(n, 0.0), mass(n, 0.0), lo(n, INFINITY), hi(n, -INFINITY);
  std::vector<std::size_t> touches(n, 0);
  for (const auto& e : plan.entries()) {
    if (e.mass <= 0.0) continue;
    double z = target_support[e.target];
    weighted[e.source] += e.mass * z;
    mass[e.source] += e.mass;
    lo[e.source] = std::min(lo[e.source], z);
    hi[e.source] = std::max(hi[e.source], z);
    ++touches[e.source];
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (touches[i] == 0) throw DomainError("source point " + std::to_string(i) + " carries no mass");
    out[i] = touches[i] == 1 ? lo[i] : std::clamp(weighted[i] / mass[i], lo[i], hi[i]);
  }
  return out;
}

double wasserstein1_distance(const EmpiricalMeasure& p, const EmpiricalMeasure& q) {
  if (p.size() == 0 || q.size() == 0) throw DomainError("wasserstein distance needs non-empty measures");

  // Sweep the merged breakpoints accumulating |F_p - F_q| * gap.
  auto po = ascending_order(p.support());
  auto qo = ascending_order(q.support());
  std::size_t i = 0, j = 0;
  double cdf_p = 0.0, cdf_q = 0.0, total = 0.0;
  double x = std::min(p.support()[po[0]], q.support()[qo[0]]);
  while (i < po.size() || j < qo.size()) {
    double next_p = i < po.size() ? p.support()[po[i]] : INFINITY;
    double next_q = j < qo.size() ? q.support()[qo[j]] : INFINITY;
    double next = std::min(next_p, next_q);
    total += std::abs(cdf_p - cdf_q) * (next - x);
    x = next;
    while (i < po.size() && p.support()[po[i]] == x) cdf_p += p.weights()[po[i++]];
    while (j < qo.size() && q.support()[qo[j]] == x) cdf_q += q.weights()[qo[j++]];
  }
  return total;
}

}  // namespace fairpot::ot
