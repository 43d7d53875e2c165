#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpot/fairpot.hpp"
#include "fairpot/metrics.hpp"

namespace fairpot::io {

/// Decimal rendering with 10 significant digits, shortest form, '.' separator.
std::string format_number(double value);
/// Locale-independent strict parse of a full field.
std::optional<double> parse_number(std::string_view field);

// Score files: header `id,score,label,group`, one record per line.

ScoreSet read_score_file(const std::filesystem::path& path);
ScoreSet parse_score_csv(std::istream& in);
/// Records without ids are written as `r<index>`.
void write_score_file(const ScoreSet& set, const std::filesystem::path& path);
void write_score_csv(const ScoreSet& set, std::ostream& out);

// Sweep result files: header `method,lambda,alpha,replicate,accuracy,disparity,on_frontier`.

enum class RowKind { Replicate, Mean, StdError };

struct SweepRow {
  std::string method;
  std::optional<double> lambda;  // NA for single-point methods
  std::optional<double> alpha;   // NA in global mode
  RowKind kind = RowKind::Replicate;
  int replicate = 0;                // meaningful for Replicate rows
  std::optional<double> accuracy;   // NA on replicate error rows
  std::optional<double> disparity;  // NA on replicate error rows
  bool on_frontier = false;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline constexpr std::string_view kSweepHeader = "method,lambda,alpha,replicate,accuracy,disparity,on_frontier";

std::vector<SweepRow> read_sweep_file(const std::filesystem::path& path);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);
void write_sweep_file(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

// Experiment configuration: a flat JSON object.

enum class Method { FairPot, PostLogit, Wasserstein, Unadjusted };

std::string_view to_string(Method m);
std::string_view to_string(SweepMode m);
std::string_view to_string(Direction d);
Method parse_method(std::string_view s);
SweepMode parse_mode(std::string_view s);
Direction parse_direction(std::string_view s);

/// lambdas 0.0, 0.1, ..., 1.0
std::vector<double> default_lambdas();

struct ExperimentConfig {
  std::vector<double> lambdas = default_lambdas();
  double alpha = 0.3;
  SweepMode mode = SweepMode::Global;
  Direction direction = Direction::BToA;
  Method method = Method::FairPot;
  std::uint64_t seed = 0;
  std::size_t bootstrap_n = 20;
  double split_ratio = 0.8;
  std::size_t n_samples = 3000;
  std::string train_path;  // empty: synthetic input
  std::string test_path;
  std::string output_dir = ".";

  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig read_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view json_text);
std::string dump_config(const ExperimentConfig& config);
void write_config(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace fairpot::io
