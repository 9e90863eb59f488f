// tracerl: train, transfer, embed and analyze from the command line.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tracerl/io/commands.hpp"
#include "tracerl/io/config.hpp"
#include "tracerl/io/experiment.hpp"
#include "tracerl/log.hpp"

namespace {

void add_run_options(CLI::App* cmd, tracerl::CommandOptions& o, std::string& seeds) {
  cmd->add_option("--config", o.config_path, "Experiment config (JSON) or a previous run's manifest.json")
      ->required();
  cmd->add_option("--out", o.out_dir, "Output directory (overrides output_dir)");
  cmd->add_option("--seeds", seeds, "Comma-separated seed list (overrides seeds)");
  cmd->add_option("--threads", o.threads, "Seeds run in parallel (default: TRACE_RL_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TRACE: policy transfer with action embeddings"};
  app.set_version_flag("--version", std::string(TRACERL_VERSION));
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress and warnings");

  tracerl::CommandOptions run;
  std::string seeds;
  auto* train = app.add_subcommand("train", "Train from scratch, one run per seed");
  add_run_options(train, run, seeds);

  auto* transfer = app.add_subcommand("transfer", "Initialize from a source checkpoint and train on the target");
  add_run_options(transfer, run, seeds);
  transfer->add_option("--source-checkpoint", run.source_checkpoint,
                       "Source checkpoint; {seed} expands to the target seed");

  auto* embed = app.add_subcommand("embed", "Fit action embeddings offline on random-policy transitions");
  add_run_options(embed, run, seeds);

  tracerl::AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Embedding checks and learning-curve statistics");
  analyze->add_option("--table", an.tables, "Embedding CSV (repeatable)")->check(CLI::ExistingFile);
  analyze->add_option("--gridworld-steps", an.gridworld_steps, "Group table rows by n-step gridworld displacement")
      ->check(CLI::Range(1, 3));
  analyze->add_flag("--monotonic", an.monotonic, "Spearman check of action index against PC1");
  analyze->add_option("--pca", an.pca_components, "Principal components to project onto")->check(CLI::PositiveNumber);
  analyze->add_option("--curve", an.curves, "Curve CSV, one per seed (repeatable)")->check(CLI::ExistingFile);
  analyze->add_option("--threshold", an.threshold, "Return threshold for episodes-to-threshold");
  analyze->add_option("--window", an.window, "Trailing window for episodes-to-threshold")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--resamples", an.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  analyze->add_option("--confidence", an.confidence, "Bootstrap band confidence")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--seed", an.seed, "Bootstrap seed");
  analyze->add_option("--out", an.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tracerl::kExitConfigError;
  }
  tracerl::set_quiet(quiet);

  if (!seeds.empty()) {
    try {
      run.seeds = tracerl::parse_seed_list(seeds);
    } catch (const tracerl::ConfigError& e) {
      std::cerr << "tracerl: " << e.what() << '\n';
      return tracerl::kExitConfigError;
    }
  }
  if (*train) return tracerl::cmd_train(run);
  if (*transfer) return tracerl::cmd_transfer(run);
  if (*embed) return tracerl::cmd_embed(run);
  return tracerl::cmd_analyze(an);
}
