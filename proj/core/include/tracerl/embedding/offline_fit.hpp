#pragma once

#include <cstdint>
#include <vector>

#include "tracerl/embedding/transition_model.hpp"
#include "tracerl/env/transition.hpp"

namespace tracerl {

struct OfflineFitConfig {
  int epochs = 50;
  int batch_size = 128;
  double lr = 1e-3;
};

// Shuffled minibatch epochs of train_embeddings_step over a fixed dataset,
// with raw states as the state embedding. Returns the mean pre-step loss of
// each epoch.
std::vector<double> fit_embeddings_offline(TransitionModel& model, ActionEmbeddingTable& table,
                                           const std::vector<Transition>& dataset, const OfflineFitConfig& config,
                                           std::uint64_t seed);

// Loss over the whole dataset (noise drawn from seed in latent mode).
double dataset_embedding_loss(const TransitionModel& model, const ActionEmbeddingTable& table,
                              const std::vector<Transition>& dataset, std::uint64_t seed = 0);

EmbeddingBatch make_embedding_batch(const std::vector<Transition>& dataset, std::span<const int> indices);

}  // namespace tracerl
