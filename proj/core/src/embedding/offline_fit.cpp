#include "tracerl/embedding/offline_fit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tracerl {

EmbeddingBatch make_embedding_batch(const std::vector<Transition>& dataset, std::span<const int> indices) {
  if (indices.empty()) throw std::invalid_argument("make_embedding_batch: empty index set");
  const auto n = static_cast<Eigen::Index>(indices.size());
  const auto width = dataset[indices[0]].state.size();
  EmbeddingBatch batch;
  batch.states.resize(width, n);
  batch.next_states.resize(width, n);
  batch.actions.resize(indices.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = dataset[indices[i]];
    batch.states.col(i) = t.state;
    batch.next_states.col(i) = t.next_state;
    batch.actions[i] = t.action_index;
  }
  return batch;
}

std::vector<double> fit_embeddings_offline(TransitionModel& model, ActionEmbeddingTable& table,
                                           const std::vector<Transition>& dataset, const OfflineFitConfig& config,
                                           std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("fit_embeddings_offline: empty dataset");
  if (config.batch_size < 1) throw std::invalid_argument("fit_embeddings_offline: batch_size must be positive");
  std::vector<double> history;
  if (config.epochs <= 0) return history;
  Rng rng(seed);
  EmbeddingOptimizers opt = make_embedding_optimizers(model, table, config.lr);
  std::vector<int> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    double sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::span<const int> idx(order.data() + start, stop - start);
      const EmbeddingBatch batch = make_embedding_batch(dataset, idx);
      const Eigen::MatrixXd noise =
          rng.normal_matrix(model.z_dim(), static_cast<Eigen::Index>(idx.size()));
      sum += train_embeddings_step(model, table, batch, opt, noise);
      ++batches;
    }
    history.push_back(sum / batches);
  }
  return history;
}

double dataset_embedding_loss(const TransitionModel& model, const ActionEmbeddingTable& table,
                              const std::vector<Transition>& dataset, std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("dataset_embedding_loss: empty dataset");
  std::vector<int> all(dataset.size());
  std::iota(all.begin(), all.end(), 0);
  Rng rng(seed);
  const Eigen::MatrixXd noise = rng.normal_matrix(model.z_dim(), static_cast<Eigen::Index>(all.size()));
  return embedding_loss(model, table, make_embedding_batch(dataset, all), noise).total;
}

}  // namespace tracerl
