#pragma once

#include <Eigen/Core>

#include "tracerl/agent/sac.hpp"

namespace tracerl {

// Soft actor-critic with a categorical actor over raw discrete actions and
// per-action Q heads. Baseline learner (no action embeddings).
struct DiscreteSacAgent {
  Mlp actor;  // state -> logits over |A|
  Mlp critic1;
  Mlp critic2;
  Mlp target1;
  Mlp target2;
  double alpha = 0.2;
  double gamma = 0.99;
  double tau = 0.999;

  static DiscreteSacAgent create(int state_dim, int action_count, const SacConfig& config, Rng& rng);

  int state_dim() const { return actor.input_dim(); }
  int action_count() const { return actor.output_dim(); }
};

// Column-wise softmax of logits.
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits);

// Samples from pi(.|s) with the inverse-CDF of uniform; greedy when
// !stochastic.
int select_discrete_action(const DiscreteSacAgent& agent, const Eigen::VectorXd& state, bool stochastic,
                           double uniform);

struct DiscreteSacGrads {
  ParamGrads actor;
  ParamGrads critic1;
  ParamGrads critic2;
};
DiscreteSacGrads zero_grads(const DiscreteSacAgent& agent);

// 0.5 * mean (Q_i(s, a) - y)^2 summed over both critics, with
// y = r + gamma (1 - done) sum_a' pi(a'|s') (min target Q(s', a') - alpha log pi(a'|s')).
double discrete_critic_loss(const DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacGrads* grads = nullptr,
                            double* mean_q = nullptr);

// mean sum_a pi(a|s) (alpha log pi(a|s) - min(Q1, Q2)(s, a)); critics fixed.
double discrete_actor_loss(const DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacGrads* grads = nullptr);

struct DiscreteSacOptimizers {
  Adam actor;
  Adam critic1;
  Adam critic2;
};
DiscreteSacOptimizers make_discrete_sac_optimizers(const DiscreteSacAgent& agent, const SacConfig& config);

SacLossReport discrete_sac_update(DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacOptimizers& optimizers);

}  // namespace tracerl
