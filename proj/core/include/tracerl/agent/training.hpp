#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tracerl/agent/discrete_sac.hpp"
#include "tracerl/agent/sac.hpp"
#include "tracerl/embedding/transition_model.hpp"
#include "tracerl/env/environment.hpp"
#include "tracerl/transfer/state_embedder.hpp"

namespace tracerl {

// Everything Algorithm-1 style training learns: policy (actor + critics),
// transition model, action embeddings and state embedder.
struct TraceArtifacts {
  SacAgent agent;
  TransitionModel model;
  ActionEmbeddingTable table;
  StateEmbedder embedder;
};

struct TraceShape {
  int state_dim = 4;     // raw task state width
  int action_count = 4;  // |A|
  int action_dim = 2;    // d
  EmbedderMode embedder_mode = EmbedderMode::kIdentity;
  int state_embed_dim = 5;  // m, learned mode only
  std::vector<int> state_embed_hiddens = {200, 100};
  SacConfig sac;
  TransitionModelConfig transition;  // state_dim / action_dim are filled in from the shape
  double embedding_init_scale = 0.1;
  double proto_bound_factor = 1.5;  // B = factor * max |W^ae| at initialization
};

// Draws parameters in a fixed order: table, embedder, agent, transition model.
TraceArtifacts make_trace_artifacts(const TraceShape& shape, std::uint64_t seed);

struct TrainingConfig {
  int episodes = 1000;
  int warmup_steps = 1000;
  int batch_size = 128;
  double embed_lr = 1e-3;
  std::size_t buffer_capacity = 100000;
  SacConfig sac;  // learning rates
  // When positive, B grows to factor * max |W^ae| after an embedding update
  // whenever the table has outgrown it, so every row stays reachable inside
  // the squash box. Zero keeps B fixed at its initial value.
  double track_proto_bound = 1.5;
};

struct EpisodeRecord {
  double episode_return = 0.0;
  int steps = 0;
};

using TrainingCurve = std::vector<EpisodeRecord>;

// Optional per-episode observer (episode index, record).
using EpisodeCallback = std::function<void(int, const EpisodeRecord&)>;

// End-of-run bookkeeping kept in checkpoints.
struct TrainingSummary {
  int episodes = 0;
  long total_steps = 0;
  std::string update_rng_state;  // engine state of the minibatch/noise stream
};

// Policy acts in embedding space, nearest_action maps to the executed
// action; after warmup, one SAC update and one embedding update per
// environment step. Frozen components are never modified.
TrainingCurve run_training(Environment& env, TraceArtifacts& artifacts, const TrainingConfig& config,
                           std::uint64_t seed, const EpisodeCallback& on_episode = {},
                           TrainingSummary* summary = nullptr);

// Baseline loop for the discrete-action SAC agent (no embeddings).
TrainingCurve run_discrete_training(Environment& env, DiscreteSacAgent& agent, const TrainingConfig& config,
                                    std::uint64_t seed, const EpisodeCallback& on_episode = {},
                                    TrainingSummary* summary = nullptr);

}  // namespace tracerl
