#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fairpot/io.hpp"
#include "fairpot/metrics.hpp"
#include "fairpot/pareto.hpp"

namespace fairpot::experiment {

struct ScoredSplit {
  ScoreSet train;
  ScoreSet test;
};

/// Generates the synthetic cohort for `seed`, splits it at `split_ratio`
/// with a seeded shuffle, fits the pooled logistic scorer on the training
/// rows and scores both sides. Record ids are `s<row>` of the cohort.
ScoredSplit synthesize_scores(std::size_t n_samples, double split_ratio, std::uint64_t seed);

/// Test set drawn from `test` with replacement, same size.
ScoreSet bootstrap_resample(const ScoreSet& test, std::uint64_t seed);

/// Evaluates one method on one train/test pair. FairPOT yields one point per
/// lambda; the other methods yield a single point with no lambda.
std::vector<TradeoffPoint> run_method(const ScoreSet& train, const ScoreSet& test, const io::ExperimentConfig& config);

struct SynthResult {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

SynthResult cmd_synth(const io::ExperimentConfig& config);

/// Per-replicate outcome: either points or the error that stopped it.
struct ReplicateResult {
  int replicate = 0;
  std::vector<TradeoffPoint> points;
  std::string error;
};

/// Rows for one method: per (lambda) the replicate rows, then `mean` and
/// `se` rows. Every row of a lambda carries the frontier flag of its mean
/// point; error rows are never on the frontier.
std::vector<io::SweepRow> aggregate_replicates(const io::ExperimentConfig& config,
                                               const std::vector<ReplicateResult>& replicates);

struct SweepResult {
  std::vector<io::SweepRow> rows;
  std::size_t failed_replicates = 0;
  std::filesystem::path result_path;
  std::filesystem::path plot_path;  // empty without --plot
};

/// Runs the configured method over its replicates and writes
/// `<output_dir>/sweep_<method>.csv` (and `.svg` when `plot` is set).
/// Synthetic input (no train/test paths) reseeds the whole pipeline per
/// replicate; file input resamples the test set with replacement.
/// Throws when every replicate fails.
SweepResult cmd_sweep(const io::ExperimentConfig& config, bool plot);

/// Cross-method frontier of the mean points of one or more sweep files.
std::vector<io::SweepRow> merge_frontier(const std::vector<std::vector<io::SweepRow>>& inputs);

std::vector<io::SweepRow> cmd_pareto(const std::vector<std::filesystem::path>& inputs,
                                     const std::filesystem::path& output, bool plot);

/// Minimal static SVG of mean trade-off points with the frontier highlighted.
std::string render_tradeoff_svg(const std::vector<io::SweepRow>& rows, const std::string& title);

}  // namespace fairpot::experiment
