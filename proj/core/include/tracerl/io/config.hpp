#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tracerl/agent/training.hpp"
#include "tracerl/embedding/offline_fit.hpp"
#include "tracerl/env/cartpole.hpp"
#include "tracerl/env/gridworld.hpp"
#include "tracerl/transfer/transfer.hpp"

namespace tracerl {

// Invalid or unparsable experiment configuration. The message names the
// offending field and, when it can be located, the source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { kTrace, kTraceNoTransfer, kSacDiscrete, kBt };
std::string to_string(Algorithm a);

enum class EnvFamily { kGridworld, kCartPole };

struct EnvConfig {
  EnvFamily family = EnvFamily::kGridworld;
  GridworldConfig gridworld;
  CartPoleConfig cartpole;

  EnvSpec spec() const;
};
std::unique_ptr<Environment> make_environment(const EnvConfig& config);

struct EmbedConfig {
  int samples = 10000;
  OfflineFitConfig fit;
  bool save_transitions = false;
};

struct ExperimentConfig {
  EnvConfig env;
  Algorithm algorithm = Algorithm::kTrace;
  TransferConfig transfer;
  TraceShape shape;  // state_dim / action_count always mirror env
  TrainingConfig training;
  EmbedConfig embed;
  std::vector<std::uint64_t> seeds;
  int budget = 0;  // episodes per seed
  std::string output_dir;
  std::string source_checkpoint;  // may contain "{seed}"

  // Transfer flags as used by this algorithm (trace-no-transfer forces all off).
  TransferConfig effective_transfer() const;
};

// Parses the JSON schema documented in the README. Required: env.family,
// algorithm, seeds, budget, output_dir. Unknown keys are rejected. A run
// manifest is accepted too; its embedded config is used.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Full snapshot with every default spelled out; parse_config round-trips it.
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

}  // namespace tracerl
