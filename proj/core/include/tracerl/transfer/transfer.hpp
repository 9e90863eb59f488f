#pragma once

#include <cstdint>
#include <string>

#include "tracerl/agent/discrete_sac.hpp"
#include "tracerl/agent/training.hpp"

namespace tracerl {

enum class Baseline { kNone, kBt };

std::string to_string(Baseline b);
Baseline baseline_from_string(const std::string& name);

struct TransferConfig {
  bool transfer_policy = true;
  bool transfer_transition = true;
  bool freeze_transition = true;
  Baseline baseline = Baseline::kNone;

  // Throws std::invalid_argument on freeze without transfer, or BT with
  // either transfer flag set.
  void validate() const;

  static TransferConfig trace_pt() { return {true, true, true, Baseline::kNone}; }
  static TransferConfig trace_p() { return {true, false, false, Baseline::kNone}; }
  static TransferConfig trace_t() { return {false, true, true, Baseline::kNone}; }
  static TransferConfig no_transfer() { return {false, false, false, Baseline::kNone}; }
  static TransferConfig bt() { return {false, false, false, Baseline::kBt}; }
};

// Target artifacts for a task sharing the source's state space. Everything is
// first drawn fresh from `seed` exactly as make_trace_artifacts(target, seed)
// would, then the selected blocks are overwritten with source copies. With
// both transfer flags off the result is identical to training from scratch.
// Policy transfer carries actor, critics and targets; the squash bound
// stays tied to the target table.
TraceArtifacts init_same_domain_target(const TraceArtifacts& source, const TraceShape& target,
                                       const TransferConfig& config, std::uint64_t seed);

// Target artifacts for a task with different state and action spaces. Both
// sides must use learned state embedders of the same width. The state
// embedder and action table are always fresh; the transition model is
// finetuned unless config.freeze_transition.
TraceArtifacts init_cross_domain_target(const TraceArtifacts& source, const TraceShape& target,
                                        const TransferConfig& config, std::uint64_t seed);

// Basic transfer: a fresh discrete SAC agent for the target whose hidden
// layers (all but the first and last) are copied from the source networks.
DiscreteSacAgent init_bt_target(const DiscreteSacAgent& source, const EnvSpec& target, const SacConfig& config,
                                std::uint64_t seed);

// Trains initialized target artifacts with the run_training loop. Frozen
// blocks are left untouched.
TrainingCurve run_transfer(TraceArtifacts& target, Environment& env, const TrainingConfig& config,
                           std::uint64_t seed, const EpisodeCallback& on_episode = {},
                           TrainingSummary* summary = nullptr);

}  // namespace tracerl
