#include "fairpot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "fairpot/baselines.hpp"
#include "fairpot/datagen.hpp"
#include "fairpot/error.hpp"
#include "fairpot/fairpot.hpp"
#include "fairpot/rng.hpp"

namespace fairpot::experiment {

namespace {

SweepSettings settings_of(const io::ExperimentConfig& config) {
  return {config.mode, config.alpha, config.direction, 1};
}

TradeoffPoint single_point(const std::pair<double, double>& metrics, io::Method method) {
  return {std::nullopt, metrics.first, metrics.second, std::string(io::to_string(method)), 0};
}

void ensure_parent(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ScoredSplit synthesize_scores(std::size_t n_samples, double split_ratio, std::uint64_t seed) {
  datagen::SyntheticConfig cfg;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  auto cohort = datagen::generate_synthetic(cfg);

  const std::size_t n = cohort.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Xoshiro256 rng(seed, stream::kSplit);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  auto n_train = static_cast<std::size_t>(std::llround(split_ratio * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_idx(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  auto train_rows = cohort.select(train_idx);
  auto test_rows = cohort.select(test_idx);
  auto scorer = datagen::fit_logistic_scorer(train_rows.features, train_rows.labels);

  auto with_ids = [](const ScoreSet& s, const std::vector<std::size_t>& rows) {
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (auto r : rows) ids.push_back("s" + std::to_string(r));
    return ScoreSet(s.records(), std::move(ids));
  };
  return {with_ids(datagen::score_table(scorer, train_rows), train_idx),
          with_ids(datagen::score_table(scorer, test_rows), test_idx)};
}

ScoreSet bootstrap_resample(const ScoreSet& test, std::uint64_t seed) {
  Xoshiro256 rng(seed, stream::kBootstrap);
  std::vector<std::size_t> picks(test.size());
  for (auto& p : picks) p = rng.below(test.size());
  return test.subset(picks);
}

std::vector<TradeoffPoint> run_method(const ScoreSet& train, const ScoreSet& test, const io::ExperimentConfig& config) {
  for (Group g : {Group::A, Group::B}) {
    if (!train.has_group(g)) throw DomainError(std::string("training scores lack group ") + to_char(g));
    if (!test.has_group(g)) throw DomainError(std::string("test scores lack group ") + to_char(g));
  }
  const auto settings = settings_of(config);
  if (config.method == io::Method::FairPot) return sweep(train, test, config.lambdas, settings);

  const auto region = evaluation_region(test, settings);
  const bool partial = config.mode == SweepMode::Partial;
  // Baselines are fitted on the training top-alpha region in partial mode.
  const ScoreSet fit_on = partial ? train.subset(top_alpha_region(train, config.alpha).member_indices) : train;

  switch (config.method) {
    case io::Method::Unadjusted:
      return {single_point(evaluate(test, region, config.mode), config.method)};
    case io::Method::PostLogit: {
      auto grid = baselines::default_post_logit_grid();
      auto params = baselines::fit_post_logit(fit_on, grid, 0.0);
      std::vector<std::size_t> indices;
      std::vector<double> scores;
      for (auto i : region.member_indices) {
        if (test[i].group != Group::B) continue;
        indices.push_back(i);
        scores.push_back(test[i].score);
      }
      auto adjusted = test.with_scores(indices, baselines::apply_post_logit(params, scores));
      return {single_point(evaluate(adjusted, region, config.mode), config.method)};
    }
    case io::Method::Wasserstein: {
      auto adjusted = baselines::wasserstein_fair(fit_on, test, region.member_indices);
      return {single_point(evaluate(adjusted, region, config.mode), config.method)};
    }
    case io::Method::FairPot: break;
  }
  return {};
}

SynthResult cmd_synth(const io::ExperimentConfig& config) {
  config.validate();
  auto split = synthesize_scores(config.n_samples, config.split_ratio, config.seed);
  const std::filesystem::path dir = config.output_dir;
  SynthResult out;
  out.train_path = config.train_path.empty() ? dir / "train.csv" : std::filesystem::path(config.train_path);
  out.test_path = config.test_path.empty() ? dir / "test.csv" : std::filesystem::path(config.test_path);
  ensure_parent(out.train_path);
  ensure_parent(out.test_path);
  io::write_score_file(split.train, out.train_path);
  io::write_score_file(split.test, out.test_path);
  out.train_rows = split.train.size();
  out.test_rows = split.test.size();
  return out;
}

std::vector<io::SweepRow> aggregate_replicates(const io::ExperimentConfig& config,
                                               const std::vector<ReplicateResult>& replicates) {
  const std::string method(io::to_string(config.method));
  const std::optional<double> alpha =
      config.mode == SweepMode::Partial ? std::optional<double>(config.alpha) : std::nullopt;

  std::vector<std::optional<double>> keys;
  if (config.method == io::Method::FairPot)
    keys.assign(config.lambdas.begin(), config.lambdas.end());
  else
    keys.push_back(std::nullopt);

  struct Summary {
    std::optional<double> accuracy, disparity, se_accuracy, se_disparity;
  };
  std::vector<Summary> summaries(keys.size());
  std::vector<TradeoffPoint> means;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::vector<double> acc, disp;
    for (const auto& r : replicates) {
      if (!r.error.empty()) continue;
      acc.push_back(r.points.at(k).accuracy);
      disp.push_back(r.points.at(k).disparity);
    }
    if (acc.empty()) continue;
    auto mean_se = [](const std::vector<double>& v) {
      const double n = static_cast<double>(v.size());
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      return std::pair{mean, se};
    };
    auto [ma, sa] = mean_se(acc);
    auto [md, sd] = mean_se(disp);
    summaries[k] = {ma, md, sa, sd};
    means.push_back({keys[k], ma, md, method, static_cast<int>(k)});
  }

  std::vector<bool> on_front(keys.size(), false);
  for (const auto& p : pareto_frontier(means)) on_front[static_cast<std::size_t>(p.replicate_id)] = true;

  std::vector<io::SweepRow> rows;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (const auto& r : replicates) {
      io::SweepRow row{method, keys[k], alpha, io::RowKind::Replicate, r.replicate, std::nullopt, std::nullopt, false};
      if (r.error.empty()) {
        row.accuracy = r.points.at(k).accuracy;
        row.disparity = r.points.at(k).disparity;
        row.on_frontier = on_front[k];
      }
      rows.push_back(std::move(row));
    }
    const auto& s = summaries[k];
    rows.push_back({method, keys[k], alpha, io::RowKind::Mean, 0, s.accuracy, s.disparity, on_front[k]});
    rows.push_back({method, keys[k], alpha, io::RowKind::StdError, 0, s.se_accuracy, s.se_disparity, on_front[k]});
  }
  return rows;
}

SweepResult cmd_sweep(const io::ExperimentConfig& config, bool plot) {
  config.validate();
  const bool synthetic = config.train_path.empty();
  const std::size_t n_replicates = std::max<std::size_t>(config.bootstrap_n, 1);

  std::optional<ScoreSet> file_train, file_test;
  if (!synthetic) {
    file_train = io::read_score_file(config.train_path);
    file_test = io::read_score_file(config.test_path);
  }

  std::vector<ReplicateResult> replicates;
  SweepResult result;
  for (std::size_t r = 0; r < n_replicates; ++r) {
    ReplicateResult rep;
    rep.replicate = static_cast<int>(r);
    try {
      const std::uint64_t seed = config.seed + r;
      if (synthetic) {
        auto split = synthesize_scores(config.n_samples, config.split_ratio, seed);
        rep.points = run_method(split.train, split.test, config);
      } else {
        auto test = config.bootstrap_n == 0 ? *file_test : bootstrap_resample(*file_test, seed);
        rep.points = run_method(*file_train, test, config);
      }
    } catch (const DomainError& e) {
      rep.error = e.what();
    } catch (const ValidationError& e) {
      rep.error = e.what();
    }
    if (!rep.error.empty()) ++result.failed_replicates;
    replicates.push_back(std::move(rep));
  }
  if (result.failed_replicates == n_replicates)
    throw std::runtime_error("all " + std::to_string(n_replicates) + " replicates failed; first error: " +
                             replicates.front().error);

  result.rows = aggregate_replicates(config, replicates);
  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  const std::string stem = "sweep_" + std::string(io::to_string(config.method));
  result.result_path = dir / (stem + ".csv");
  io::write_sweep_file(result.rows, result.result_path);
  if (plot) {
    result.plot_path = dir / (stem + ".svg");
    write_text(result.plot_path, render_tradeoff_svg(result.rows, stem));
  }
  return result;
}

std::vector<io::SweepRow> merge_frontier(const std::vector<std::vector<io::SweepRow>>& inputs) {
  if (inputs.empty()) throw ValidationError("pareto needs at least one sweep file");

  std::vector<io::SweepRow> means;
  for (const auto& rows : inputs)
    for (const auto& r : rows)
      if (r.kind == io::RowKind::Mean && r.accuracy && r.disparity) means.push_back(r);
  for (const auto& r : means)
    if (r.alpha != means.front().alpha)
      throw ValidationError("sweep files mix incompatible modes or alpha values");

  std::vector<TradeoffPoint> points;
  for (std::size_t i = 0; i < means.size(); ++i)
    points.push_back({means[i].lambda, *means[i].accuracy, *means[i].disparity, means[i].method, static_cast<int>(i)});

  std::vector<io::SweepRow> out;
  for (const auto& p : pareto_frontier(points)) {
    auto row = means[static_cast<std::size_t>(p.replicate_id)];
    row.on_frontier = true;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<io::SweepRow> cmd_pareto(const std::vector<std::filesystem::path>& inputs,
                                     const std::filesystem::path& output, bool plot) {
  std::vector<std::vector<io::SweepRow>> files;
  for (const auto& path : inputs) files.push_back(io::read_sweep_file(path));
  auto frontier = merge_frontier(files);
  ensure_parent(output);
  io::write_sweep_file(frontier, output);
  if (plot) {
    std::vector<io::SweepRow> all;
    for (auto& f : files) all.insert(all.end(), f.begin(), f.end());
    auto svg_path = output;
    svg_path.replace_extension(".svg");
    // Recompute flags against the merged frontier for the plot.
    for (auto& r : all) {
      r.on_frontier = std::any_of(frontier.begin(), frontier.end(), [&](const io::SweepRow& f) {
        return f.method == r.method && f.lambda == r.lambda && r.kind == io::RowKind::Mean;
      });
    }
    write_text(svg_path, render_tradeoff_svg(all, "pareto frontier"));
  }
  return frontier;
}

std::string render_tradeoff_svg(const std::vector<io::SweepRow>& rows, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 480, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  const std::map<std::string, std::string> palette = {
      {"fairpot", "#1f77b4"}, {"post-logit", "#ff7f0e"}, {"wasserstein", "#2ca02c"}, {"unadjusted", "#7f7f7f"}};

  std::map<std::string, std::vector<const io::SweepRow*>> series;
  std::vector<const io::SweepRow*> front;
  double x_max = 0.0, y_min = 1.0, y_max = 0.0;
  for (const auto& r : rows) {
    if (r.kind != io::RowKind::Mean || !r.accuracy || !r.disparity) continue;
    series[r.method].push_back(&r);
    if (r.on_frontier) front.push_back(&r);
    x_max = std::max(x_max, *r.disparity);
    y_min = std::min(y_min, *r.accuracy);
    y_max = std::max(y_max, *r.accuracy);
  }
  if (x_max <= 0.0) x_max = 0.1;
  if (y_max <= y_min) {
    y_min -= 0.05;
    y_max += 0.05;
  }
  const double x_hi = x_max * 1.1;
  const double y_pad = 0.1 * (y_max - y_min);
  const double y_lo = y_min - y_pad, y_hi = y_max + y_pad;
  auto px = [&](double d) { return kLeft + d / x_hi * (kWidth - kLeft - kRight); };
  auto py = [&](double a) { return kHeight - kBottom - (a - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom); };
  auto num = [](double v) { return io::format_number(std::round(v * 100.0) / 100.0); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double xv = x_hi * t / 4.0, yv = y_lo + (y_hi - y_lo) * t / 4.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
        << io::format_number(std::round(xv * 1000.0) / 1000.0) << "</text>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
        << io::format_number(std::round(yv * 1000.0) / 1000.0) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">disparity</text>\n";
  svg << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (kTop + kHeight - kBottom) / 2 << ")\">accuracy</text>\n";

  int legend_row = 0;
  for (auto& [method, pts] : series) {
    std::stable_sort(pts.begin(), pts.end(), [](const io::SweepRow* l, const io::SweepRow* r) {
      return l->lambda.value_or(0.0) < r->lambda.value_or(0.0);
    });
    auto it = palette.find(method);
    const std::string color = it == palette.end() ? "#000000" : it->second;
    if (pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (auto* p : pts) svg << num(px(*p->disparity)) << ',' << num(py(*p->accuracy)) << ' ';
      svg << "\"/>\n";
    }
    for (auto* p : pts)
      svg << "<circle cx=\"" << num(px(*p->disparity)) << "\" cy=\"" << num(py(*p->accuracy)) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    svg << "<text x=\"" << kWidth - kRight - 110 << "\" y=\"" << kTop + 14 * legend_row++ << "\" fill=\"" << color
        << "\">" << method << "</text>\n";
  }

  std::sort(front.begin(), front.end(),
            [](const io::SweepRow* l, const io::SweepRow* r) { return *l->disparity < *r->disparity; });
  if (front.size() > 1) {
    svg << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"4 3\" points=\"";
    for (auto* p : front) svg << num(px(*p->disparity)) << ',' << num(py(*p->accuracy)) << ' ';
    svg << "\"/>\n";
  }
  for (auto* p : front)
    svg << "<circle cx=\"" << num(px(*p->disparity)) << "\" cy=\"" << num(py(*p->accuracy))
        << "\" r=\"6\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"" << kWidth - kRight - 110 << "\" y=\"" << kTop + 14 * legend_row << "\" fill=\"#d62728\">frontier</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fairpot::experiment
