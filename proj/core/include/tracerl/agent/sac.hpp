#pragma once

#include <vector>

#include <Eigen/Core>

#include "tracerl/embedding/action_embedding_table.hpp"
#include "tracerl/env/transition.hpp"
#include "tracerl/nn/adam.hpp"
#include "tracerl/nn/mlp.hpp"
#include "tracerl/transfer/state_embedder.hpp"

namespace tracerl {

struct SacConfig {
  std::vector<int> hiddens = {200, 100};
  double actor_lr = 1e-5;
  double critic_lr = 1e-3;
  double state_embed_lr = 1e-3;
  double alpha = 0.2;
  double gamma = 0.99;
  double tau = 0.999;  // target retention: target <- tau * target + (1 - tau) * online
};

// Soft actor-critic over continuous proto-actions in the action-embedding
// space, squashed to (-proto_bound, proto_bound) by tanh.
struct SacAgent {
  Mlp actor;  // state embedding -> (mu, raw log sigma), each proto_dim wide
  Mlp critic1;
  Mlp critic2;
  Mlp target1;
  Mlp target2;
  double alpha = 0.2;
  double gamma = 0.99;
  double tau = 0.999;
  double proto_bound = 1.0;

  static SacAgent create(int state_dim, int proto_dim, const SacConfig& config, double proto_bound, Rng& rng);

  int state_dim() const { return actor.input_dim(); }
  int proto_dim() const { return actor.output_dim() / 2; }
};

struct ProtoAction {
  Eigen::VectorXd action;
  double log_prob = 0.0;
};

// a = B * tanh(mu + sigma .* noise) when stochastic, B * tanh(mu) otherwise.
ProtoAction select_proto_action(const SacAgent& agent, const Eigen::VectorXd& state_emb, bool stochastic,
                                const Eigen::VectorXd& noise);

// argmin_i ||proto - e(a_i)||_2, ties to the lowest index.
int nearest_action(const ActionEmbeddingTable& table, const Eigen::VectorXd& proto);

// Column-batched view of sampled transitions (raw states).
struct SacBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd proto_actions;
  std::vector<int> actions;
  Eigen::RowVectorXd rewards;
  Eigen::RowVectorXd dones;
  Eigen::MatrixXd next_states;
};
SacBatch make_sac_batch(const std::vector<const Transition*>& transitions);

struct SacNoise {
  Eigen::MatrixXd next_action;  // d x B, for the target's fresh next-state sample
  Eigen::MatrixXd action;       // d x B, for the actor loss
};

struct SacGrads {
  ParamGrads actor;
  ParamGrads critic1;
  ParamGrads critic2;
  ParamGrads embedder;
};
SacGrads zero_grads(const SacAgent& agent, const StateEmbedder& embedder);

// Soft critic target y = r + gamma (1 - done) (min target Q(s', a') - alpha log pi(a'|s'))
// with a' freshly sampled from the actor at s'. Treated as a constant.
Eigen::RowVectorXd sac_soft_targets(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                                    const Eigen::MatrixXd& next_noise);

// 0.5 * mean (Q1 - y)^2 + 0.5 * mean (Q2 - y)^2 for fixed targets y.
// Gradients flow into both critics and the state embedder.
double sac_critic_loss(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                       const Eigen::RowVectorXd& targets, SacGrads* grads = nullptr, double* mean_q = nullptr);

// mean (alpha log pi(a|s) - min(Q1, Q2)(s, a)) with reparameterized a.
// Gradients flow into the actor and, unless grads->embedder is empty, the
// state embedder; critics are held fixed.
double sac_actor_loss(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                      const Eigen::MatrixXd& noise, SacGrads* grads = nullptr);

struct SacLossReport {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double mean_q = 0.0;
};

struct SacOptimizers {
  Adam actor;
  Adam critic1;
  Adam critic2;
  Adam embedder;
};
SacOptimizers make_sac_optimizers(const SacAgent& agent, const StateEmbedder& embedder, const SacConfig& config);

// Critic step, then actor step against the updated critics, then one
// embedder step on the critic-loss gradient, then Polyak targets.
// embedder_trainable = false keeps the embedder untouched. A non-null
// target_embedder computes the bootstrap targets and tracks the online
// embedder with the critics' tau.
SacLossReport sac_update(SacAgent& agent, StateEmbedder& embedder, const SacBatch& batch, SacOptimizers& optimizers,
                         const SacNoise& noise, bool embedder_trainable = true,
                         StateEmbedder* target_embedder = nullptr);

}  // namespace tracerl
