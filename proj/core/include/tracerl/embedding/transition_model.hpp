#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "tracerl/embedding/action_embedding_table.hpp"
#include "tracerl/nn/adam.hpp"
#include "tracerl/nn/mlp.hpp"

namespace tracerl {

enum class TransitionMode { kDeterministic, kLatent };

struct TransitionModelConfig {
  TransitionMode mode = TransitionMode::kDeterministic;
  int state_dim = 4;   // width of the (embedded) state
  int action_dim = 2;  // d
  std::vector<int> hiddens = {64, 32};
  int z_dim = 8;
  std::vector<int> z_hiddens = {32};
  double beta = 1e-2;
};

// Next-state predictor. The decoder maps (state, action embedding, z) to the
// predicted next state. z enters the decoder's first layer through its own
// weight block (z_weight), which is algebraically the same as concatenating z
// to the decoder input; the deterministic mode simply has no z block.
class TransitionModel {
 public:
  TransitionModel() = default;
  static TransitionModel create(const TransitionModelConfig& config, Rng& rng);

  const TransitionModelConfig& config() const { return config_; }
  TransitionMode mode() const { return config_.mode; }
  bool latent() const { return config_.mode == TransitionMode::kLatent; }
  int state_dim() const { return config_.state_dim; }
  int action_dim() const { return config_.action_dim; }
  int z_dim() const { return latent() ? config_.z_dim : 0; }
  double beta() const { return config_.beta; }

  Mlp& encoder() { return encoder_; }
  const Mlp& encoder() const { return encoder_; }
  Mlp& decoder() { return decoder_; }
  const Mlp& decoder() const { return decoder_; }
  Eigen::MatrixXd& z_weight() { return z_weight_; }
  const Eigen::MatrixXd& z_weight() const { return z_weight_; }

  bool frozen = false;

 private:
  friend TransitionModel deterministic_reduction(const TransitionModel& latent_model);

  TransitionModelConfig config_;
  Mlp encoder_;  // latent only: (state ++ action) -> (mu, raw log sigma)
  Mlp decoder_;  // (state ++ action) [+ z_weight * z] -> next state
  Eigen::MatrixXd z_weight_;
};

// Deterministic model sharing the decoder of a latent model (z block dropped).
TransitionModel deterministic_reduction(const TransitionModel& latent_model);

struct Prediction {
  Eigen::MatrixXd next_state;  // state_dim x B
  Eigen::MatrixXd mu;          // z_dim x B (empty when deterministic)
  Eigen::MatrixXd log_sigma;   // z_dim x B, clamped
};

// Batched prediction; noise is z_dim x B standard-normal draws (ignored in
// deterministic mode).
Prediction predict_next(const TransitionModel& model, const Eigen::MatrixXd& state_emb,
                        const Eigen::MatrixXd& action_emb, const Eigen::MatrixXd& noise);
Prediction predict_next(const TransitionModel& model, const Eigen::VectorXd& state_emb,
                        const Eigen::VectorXd& action_emb, const Eigen::VectorXd& noise);

// States arrive already embedded and detached from any state embedder.
struct EmbeddingBatch {
  Eigen::MatrixXd states;       // m x B
  std::vector<int> actions;     // B
  Eigen::MatrixXd next_states;  // m x B (regression targets)
};

struct TransitionModelGrads {
  ParamGrads encoder;
  ParamGrads decoder;
  Eigen::MatrixXd z_weight;
};
TransitionModelGrads zero_grads(const TransitionModel& model);

struct EmbeddingLoss {
  double total = 0.0;
  double prediction = 0.0;  // batch mean of squared L2 error
  double kl = 0.0;          // batch mean KL (before beta)
};

// Batch mean of ||s~' - s'||^2 + beta * KL(N(mu, sigma) || N(0, I)); the KL
// term is absent in deterministic mode. Gradients are accumulated into the
// optional outputs (table_grad has the table's shape).
EmbeddingLoss embedding_loss(const TransitionModel& model, const ActionEmbeddingTable& table,
                             const EmbeddingBatch& batch, const Eigen::MatrixXd& noise,
                             TransitionModelGrads* model_grads = nullptr, Eigen::MatrixXd* table_grad = nullptr);

struct EmbeddingOptimizers {
  Adam encoder;
  Adam decoder;
  Adam z_weight;
  Adam table;
};
EmbeddingOptimizers make_embedding_optimizers(const TransitionModel& model, const ActionEmbeddingTable& table,
                                              double lr);

// One Adam step on the model (unless frozen) and on the table rows used by the
// batch (unless frozen). Returns the pre-step loss.
double train_embeddings_step(TransitionModel& model, ActionEmbeddingTable& table, const EmbeddingBatch& batch,
                             EmbeddingOptimizers& optimizers, const Eigen::MatrixXd& noise);

}  // namespace tracerl
