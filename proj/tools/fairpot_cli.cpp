// fairpot synth|sweep|pareto: experiment harness for proportional
// optimal-transport post-processing.
//
// Exit codes: 0 success, 2 invalid input or configuration, 1 runtime failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairpot/error.hpp"
#include "fairpot/experiment.hpp"
#include "fairpot/io.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> method, mode, direction, output_dir;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bootstrap_n;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration");
  cmd->add_option("--method", o.method, "fairpot | post-logit | wasserstein | unadjusted");
  cmd->add_option("--mode", o.mode, "global | partial");
  cmd->add_option("--alpha", o.alpha, "top-alpha region size for partial mode");
  cmd->add_option("--direction", o.direction, "b_to_a | a_to_b");
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--bootstrap-n", o.bootstrap_n, "number of replicates");
  cmd->add_option("--output-dir", o.output_dir, "directory for result files");
}

fairpot::io::ExperimentConfig load(const Overrides& o) {
  using namespace fairpot::io;
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : read_config(o.config_path);
  if (o.method) c.method = parse_method(*o.method);
  if (o.mode) c.mode = parse_mode(*o.mode);
  if (o.direction) c.direction = parse_direction(*o.direction);
  if (o.alpha) c.alpha = *o.alpha;
  if (o.seed) c.seed = *o.seed;
  if (o.bootstrap_n) c.bootstrap_n = *o.bootstrap_n;
  if (o.output_dir) c.output_dir = *o.output_dir;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairpot: fairness post-processing of risk scores by proportional optimal transport"};
  app.require_subcommand(1);

  Overrides synth_opts, sweep_opts, pareto_opts;
  bool sweep_plot = false, pareto_plot = false;
  std::vector<std::string> pareto_inputs;
  std::string pareto_output;

  auto* synth = app.add_subcommand("synth", "generate the synthetic cohort and write train/test score files");
  add_common(synth, synth_opts);

  auto* sweep = app.add_subcommand("sweep", "evaluate a method over its trade-off grid and replicates");
  add_common(sweep, sweep_opts);
  sweep->add_flag("--plot", sweep_plot, "also write an SVG of the trade-off curve");

  auto* pareto = app.add_subcommand("pareto", "merge sweep files into the cross-method Pareto frontier");
  add_common(pareto, pareto_opts);
  pareto->add_option("inputs", pareto_inputs, "sweep result files")->required();
  pareto->add_option("--output", pareto_output, "frontier file (default <output-dir>/frontier.csv)");
  pareto->add_flag("--plot", pareto_plot, "also write an SVG next to the frontier file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      auto r = fairpot::experiment::cmd_synth(load(synth_opts));
      std::cout << "wrote " << r.train_path.string() << " (" << r.train_rows << " rows), " << r.test_path.string()
                << " (" << r.test_rows << " rows)\n";
    } else if (*sweep) {
      auto r = fairpot::experiment::cmd_sweep(load(sweep_opts), sweep_plot);
      std::cout << "wrote " << r.result_path.string();
      if (!r.plot_path.empty()) std::cout << " and " << r.plot_path.string();
      std::cout << '\n';
      if (r.failed_replicates > 0) std::cerr << r.failed_replicates << " replicate(s) failed; see error rows\n";
    } else if (*pareto) {
      auto config = load(pareto_opts);
      std::filesystem::path out = pareto_output.empty() ? std::filesystem::path(config.output_dir) / "frontier.csv"
                                                        : std::filesystem::path(pareto_output);
      std::vector<std::filesystem::path> inputs(pareto_inputs.begin(), pareto_inputs.end());
      auto frontier = fairpot::experiment::cmd_pareto(inputs, out, pareto_plot);
      std::cout << "wrote " << out.string() << " (" << frontier.size() << " frontier points)\n";
    }
  } catch (const fairpot::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
