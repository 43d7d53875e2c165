#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fairpot {

enum class Group : std::uint8_t { A = 0, B = 1 };

constexpr Group other(Group g) noexcept { return g == Group::A ? Group::B : Group::A; }
char to_char(Group g) noexcept;

struct ScoredRecord {
  double score = 0.0;
  std::uint8_t label = 0;
  Group group = Group::A;

  friend bool operator==(const ScoredRecord&, const ScoredRecord&) = default;
};

// Per-(label, group) record counts.
struct LabelGroupCounts {
  std::size_t pos_a = 0;
  std::size_t neg_a = 0;
  std::size_t pos_b = 0;
  std::size_t neg_b = 0;

  std::size_t positives() const noexcept { return pos_a + pos_b; }
  std::size_t negatives() const noexcept { return neg_a + neg_b; }
  std::size_t in_group(Group g) const noexcept {
    return g == Group::A ? pos_a + neg_a : pos_b + neg_b;
  }
  std::size_t positives_in(Group g) const noexcept { return g == Group::A ? pos_a : pos_b; }
  std::size_t negatives_in(Group g) const noexcept { return g == Group::A ? neg_a : neg_b; }

  friend bool operator==(const LabelGroupCounts&, const LabelGroupCounts&) = default;
};

enum class SortState : std::uint8_t { Unsorted, DescendingByScore };

/// An immutable collection of scored records with cached label/group counts.
///
/// Construction validates every record (finite score in [0,1], binary label).
/// Optional string ids are carried alongside the records for file round trips;
/// when present there is exactly one per record.
class ScoreSet {
 public:
  ScoreSet() = default;
  explicit ScoreSet(std::vector<ScoredRecord> records, std::vector<std::string> ids = {});

  const std::vector<ScoredRecord>& records() const noexcept { return records_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const ScoredRecord& operator[](std::size_t i) const { return records_[i]; }
  const LabelGroupCounts& counts() const noexcept { return counts_; }
  SortState sort_state() const noexcept { return sort_state_; }

  bool has_group(Group g) const noexcept { return counts_.in_group(g) > 0; }

  /// Scores of one group, in record order.
  std::vector<double> group_scores(Group g) const;
  /// Record indices of one group, in record order.
  std::vector<std::size_t> group_indices(Group g) const;

  /// Copy with records stably sorted by descending score.
  ScoreSet sorted_descending() const;

  /// Copy with the scores of `indices` replaced by `scores` (same length).
  ScoreSet with_scores(std::span<const std::size_t> indices, std::span<const double> scores) const;

  /// Copy holding only the records at `indices`, in the given order.
  ScoreSet subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const ScoreSet& l, const ScoreSet& r) {
    return l.records_ == r.records_ && l.ids_ == r.ids_;
  }

 private:
  std::vector<ScoredRecord> records_;
  std::vector<std::string> ids_;
  LabelGroupCounts counts_;
  SortState sort_state_ = SortState::Unsorted;
};

/// The records holding the ceil(alpha * N) largest scores.
struct TopAlphaRegion {
  double alpha = 1.0;
  std::size_t n_alpha = 0;
  double threshold = 0.0;  // the n_alpha-th largest score
  std::size_t source_size = 0;
  std::vector<std::size_t> member_indices;  // ascending record index
};

/// ceil(x) with a 1e-12 guard so exact multiples are not over-counted through
/// floating-point error (0.3 * 10 rounds to 3, not 4).
std::size_t guarded_ceil(double x);

/// Number of pairs (p, n) with p > n, p drawn from `positive`, n from `negative`.
std::uint64_t count_ordered_pairs(std::span<const double> positive, std::span<const double> negative);

double auc(const ScoreSet& s);
double xauc(const ScoreSet& s, Group from, Group to);
double xauc_disparity(const ScoreSet& s);

TopAlphaRegion top_alpha_region(const ScoreSet& s, double alpha);
double pauc(const ScoreSet& s, const TopAlphaRegion& region);
double pxauc(const ScoreSet& s, const TopAlphaRegion& region, Group from, Group to);
double pxauc_disparity(const ScoreSet& s, const TopAlphaRegion& region);

}  // namespace fairpot
