#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tracerl {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitRuntimeFailure = 3 };

struct CommandOptions {
  std::string config_path;
  std::string source_checkpoint;  // overrides the config; "{seed}" expands per seed
  std::string out_dir;            // overrides output_dir
  std::optional<std::vector<std::uint64_t>> seeds;
  int threads = 0;  // 0: TRACE_RL_THREADS / hardware
};

// Each writes <out>/seed_<s>/... per seed plus <out>/manifest.json, which
// can be passed back as --config to reproduce the run. Errors are reported
// on stderr and mapped to exit codes.
int cmd_train(const CommandOptions& options);
int cmd_transfer(const CommandOptions& options);
int cmd_embed(const CommandOptions& options);

struct AnalyzeOptions {
  std::vector<std::string> tables;  // embedding CSVs
  int gridworld_steps = 0;          // > 0: group tables by net displacement
  bool monotonic = false;           // Spearman check for ordered actions
  int pca_components = 2;
  std::vector<std::string> curves;  // curve CSVs, one per seed
  double threshold = 8.0;
  int window = 100;
  int resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::string out_dir;
};

// Writes <out>/report.json plus table_<i>_pca.csv and curve_band.csv.
int cmd_analyze(const AnalyzeOptions& options);

}  // namespace tracerl
