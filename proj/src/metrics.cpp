#include "fairpot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairpot/error.hpp"

namespace fairpot {

char to_char(Group g) noexcept { return g == Group::A ? 'a' : 'b'; }

namespace {

void tally(LabelGroupCounts& c, const ScoredRecord& r) {
  if (r.group == Group::A) {
    (r.label ? c.pos_a : c.neg_a)++;
  } else {
    (r.label ? c.pos_b : c.neg_b)++;
  }
}

double pair_fraction(std::uint64_t count, std::size_t n_pos, std::size_t n_neg) {
  return static_cast<double>(count) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Scores of records matching (label, group) among `indices` (all records when null).
template <typename Pred>
std::vector<double> collect(const ScoreSet& s, const std::vector<std::size_t>* indices, Pred keep) {
  std::vector<double> out;
  auto visit = [&](std::size_t i) {
    const auto& r = s[i];
    if (keep(r)) out.push_back(r.score);
  };
  if (indices) {
    for (auto i : *indices) visit(i);
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) visit(i);
  }
  return out;
}

double cross_group_fraction(const ScoreSet& s, const std::vector<std::size_t>* indices, Group from,
                            Group to) {
  if (from == to) throw DomainError("xauc requires two distinct groups");
  auto pos = collect(s, indices, [&](const ScoredRecord& r) { return r.label == 1 && r.group == from; });
  auto neg = collect(s, indices, [&](const ScoredRecord& r) { return r.label == 0 && r.group == to; });
  if (pos.empty() || neg.empty()) return 0.0;
  return pair_fraction(count_ordered_pairs(pos, neg), pos.size(), neg.size());
}

void check_region(const ScoreSet& s, const TopAlphaRegion& region) {
  if (region.source_size != s.size())
    throw DomainError("top-alpha region was derived from a score set of size " +
                      std::to_string(region.source_size) + ", got " + std::to_string(s.size()));
}

}  // namespace

ScoreSet::ScoreSet(std::vector<ScoredRecord> records, std::vector<std::string> ids)
    : records_(std::move(records)), ids_(std::move(ids)) {
  if (!ids_.empty() && ids_.size() != records_.size())
    throw DomainError("id count does not match record count");
  bool descending = true;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0)
      throw ValidationError("record " + std::to_string(i) + ": score outside [0,1]");
    if (r.label > 1) throw ValidationError("record " + std::to_string(i) + ": label must be 0 or 1");
    if (r.group != Group::A && r.group != Group::B)
      throw ValidationError("record " + std::to_string(i) + ": group must be a or b");
    tally(counts_, r);
    if (i > 0 && records_[i - 1].score < r.score) descending = false;
  }
  sort_state_ = descending && !records_.empty() ? SortState::DescendingByScore : SortState::Unsorted;
}

std::vector<double> ScoreSet::group_scores(Group g) const {
  std::vector<double> out;
  out.reserve(counts_.in_group(g));
  for (const auto& r : records_)
    if (r.group == g) out.push_back(r.score);
  return out;
}

std::vector<std::size_t> ScoreSet::group_indices(Group g) const {
  std::vector<std::size_t> out;
  out.reserve(counts_.in_group(g));
  for (std::size_t i = 0; i < records_.size(); ++i)
    if (records_[i].group == g) out.push_back(i);
  return out;
}

ScoreSet ScoreSet::sorted_descending() const {
  std::vector<std::size_t> order(records_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return records_[l].score > records_[r].score; });
  return subset(order);
}

ScoreSet ScoreSet::with_scores(std::span<const std::size_t> indices, std::span<const double> scores) const {
  if (indices.size() != scores.size()) throw DomainError("with_scores: index/score length mismatch");
  auto records = records_;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= records.size()) throw DomainError("with_scores: index out of range");
    records[indices[k]].score = scores[k];
  }
  return ScoreSet(std::move(records), ids_);
}

ScoreSet ScoreSet::subset(std::span<const std::size_t> indices) const {
  std::vector<ScoredRecord> records;
  std::vector<std::string> ids;
  records.reserve(indices.size());
  for (auto i : indices) {
    if (i >= records_.size()) throw DomainError("subset: index out of range");
    records.push_back(records_[i]);
    if (!ids_.empty()) ids.push_back(ids_[i]);
  }
  return ScoreSet(std::move(records), std::move(ids));
}

std::size_t guarded_ceil(double x) {
  double c = std::ceil(x - 1e-12);
  return c <= 0.0 ? 0 : static_cast<std::size_t>(c);
}

std::uint64_t count_ordered_pairs(std::span<const double> positive, std::span<const double> negative) {
  std::vector<double> neg(negative.begin(), negative.end());
  std::sort(neg.begin(), neg.end());
  std::uint64_t count = 0;
  for (double p : positive)
    count += static_cast<std::uint64_t>(std::lower_bound(neg.begin(), neg.end(), p) - neg.begin());
  return count;
}

double auc(const ScoreSet& s) {
  const auto& c = s.counts();
  if (c.positives() == 0 || c.negatives() == 0) return 0.0;
  auto pos = collect(s, nullptr, [](const ScoredRecord& r) { return r.label == 1; });
  auto neg = collect(s, nullptr, [](const ScoredRecord& r) { return r.label == 0; });
  return pair_fraction(count_ordered_pairs(pos, neg), pos.size(), neg.size());
}

double xauc(const ScoreSet& s, Group from, Group to) { return cross_group_fraction(s, nullptr, from, to); }

double xauc_disparity(const ScoreSet& s) {
  return std::abs(xauc(s, Group::A, Group::B) - xauc(s, Group::B, Group::A));
}

TopAlphaRegion top_alpha_region(const ScoreSet& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (s.empty()) throw DomainError("top-alpha region of an empty score set");

  TopAlphaRegion region;
  region.alpha = alpha;
  region.source_size = s.size();
  region.n_alpha = std::clamp<std::size_t>(guarded_ceil(alpha * static_cast<double>(s.size())), 1, s.size());

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return s[l].score > s[r].score; });
  order.resize(region.n_alpha);
  region.threshold = s[order.back()].score;
  std::sort(order.begin(), order.end());
  region.member_indices = std::move(order);
  return region;
}

double pauc(const ScoreSet& s, const TopAlphaRegion& region) {
  check_region(s, region);
  auto pos = collect(s, &region.member_indices, [](const ScoredRecord& r) { return r.label == 1; });
  if (pos.empty()) return 0.0;
  auto neg = collect(s, &region.member_indices, [](const ScoredRecord& r) { return r.label == 0; });
  if (neg.empty()) return 1.0;
  return pair_fraction(count_ordered_pairs(pos, neg), pos.size(), neg.size());
}

double pxauc(const ScoreSet& s, const TopAlphaRegion& region, Group from, Group to) {
  check_region(s, region);
  return cross_group_fraction(s, &region.member_indices, from, to);
}

double pxauc_disparity(const ScoreSet& s, const TopAlphaRegion& region) {
  return std::abs(pxauc(s, region, Group::A, Group::B) - pxauc(s, region, Group::B, Group::A));
}

}  // namespace fairpot
