#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracerl/embedding/action_embedding_table.hpp"
#include "tracerl/env/transition.hpp"
#include "tracerl/io/checkpoint.hpp"
#include "tracerl/io/config.hpp"

namespace tracerl {

struct SeedRun {
  TrainingCurve curve;
  Checkpoint checkpoint;
};

// One seed of source training (trace or sac-discrete) from scratch.
SeedRun run_train_seed(const ExperimentConfig& config, std::uint64_t seed, bool progress = false);

// One seed of target training initialized from a source checkpoint. The
// path is chosen from the state spaces: equal raw state spaces with identity
// embedders use same-domain transfer, learned embedders the cross-domain one.
// Source/target mismatches raise ConfigError.
SeedRun run_transfer_seed(const ExperimentConfig& config, const Checkpoint& source, std::uint64_t seed,
                          bool progress = false);

struct EmbedRun {
  ActionEmbeddingTable table;
  std::vector<double> losses;  // mean loss per epoch
  std::vector<Transition> data;
};

// Random-policy transitions followed by an offline fit of a fresh table and
// transition model (identity state embedder only).
EmbedRun run_embed_seed(const ExperimentConfig& config, std::uint64_t seed);

// Replaces every "{seed}" in pattern.
std::string expand_seed(const std::string& pattern, std::uint64_t seed);

// "1,2,3" -> {1, 2, 3}; throws ConfigError on malformed input.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// Worker cap from TRACE_RL_THREADS (default: hardware concurrency, min 1).
int worker_threads();

}  // namespace tracerl
