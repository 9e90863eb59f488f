#include "tracerl/agent/discrete_sac.hpp"

#include <stdexcept>

namespace tracerl {

namespace {

std::vector<int> stack(int in, const std::vector<int>& hiddens, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hiddens.begin(), hiddens.end());
  sizes.push_back(out);
  return sizes;
}

Eigen::MatrixXd log_softmax_columns(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double mx = out.col(c).maxCoeff();
    const double lse = mx + std::log((out.col(c).array() - mx).exp().sum());
    out.col(c).array() -= lse;
  }
  return out;
}

void check_batch(const DiscreteSacAgent& agent, const SacBatch& batch) {
  const Eigen::Index n = batch.states.cols();
  if (n < 2) throw std::invalid_argument("discrete SAC: batch must hold at least 2 transitions");
  if (batch.states.rows() != agent.state_dim() || static_cast<Eigen::Index>(batch.actions.size()) != n ||
      batch.rewards.size() != n || batch.dones.size() != n || batch.next_states.cols() != n) {
    throw std::invalid_argument("discrete SAC: inconsistent batch shapes");
  }
  for (int a : batch.actions) {
    if (a < 0 || a >= agent.action_count()) throw std::out_of_range("discrete SAC: action index out of range");
  }
}

}  // namespace

DiscreteSacAgent DiscreteSacAgent::create(int state_dim, int action_count, const SacConfig& config, Rng& rng) {
  if (config.tau < 0.0 || config.tau > 1.0) throw std::invalid_argument("DiscreteSacAgent: tau must lie in [0, 1]");
  DiscreteSacAgent a;
  a.actor = Mlp::glorot(stack(state_dim, config.hiddens, action_count), Activation::kRelu, Activation::kLinear, rng);
  a.critic1 = Mlp::glorot(stack(state_dim, config.hiddens, action_count), Activation::kRelu, Activation::kLinear, rng);
  a.critic2 = Mlp::glorot(stack(state_dim, config.hiddens, action_count), Activation::kRelu, Activation::kLinear, rng);
  a.target1 = a.critic1;
  a.target2 = a.critic2;
  a.alpha = config.alpha;
  a.gamma = config.gamma;
  a.tau = config.tau;
  return a;
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
  return log_softmax_columns(logits).array().exp().matrix();
}

int select_discrete_action(const DiscreteSacAgent& agent, const Eigen::VectorXd& state, bool stochastic,
                           double uniform) {
  const Eigen::VectorXd logits = agent.actor.forward(state);
  if (!stochastic) {
    Eigen::Index best;
    logits.maxCoeff(&best);
    return static_cast<int>(best);
  }
  const Eigen::VectorXd p = softmax_columns(Eigen::MatrixXd(logits)).col(0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    if (uniform < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size() - 1);
}

DiscreteSacGrads zero_grads(const DiscreteSacAgent& agent) {
  return {zeros_like(agent.actor.params()), zeros_like(agent.critic1.params()), zeros_like(agent.critic2.params())};
}

double discrete_critic_loss(const DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacGrads* grads,
                            double* mean_q) {
  check_batch(agent, batch);
  const Eigen::Index n = batch.states.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Eigen::MatrixXd next_logp = log_softmax_columns(agent.actor.forward(batch.next_states));
  const Eigen::MatrixXd next_p = next_logp.array().exp().matrix();
  const Eigen::MatrixXd target_q = agent.target1.forward(batch.next_states).cwiseMin(agent.target2.forward(batch.next_states));
  const Eigen::RowVectorXd soft_v =
      (next_p.array() * (target_q.array() - agent.alpha * next_logp.array())).matrix().colwise().sum();
  const Eigen::RowVectorXd y =
      batch.rewards.array() + agent.gamma * (1.0 - batch.dones.array()) * soft_v.array();

  MlpTape tape1, tape2;
  const Eigen::MatrixXd q1 = agent.critic1.forward(batch.states, tape1);
  const Eigen::MatrixXd q2 = agent.critic2.forward(batch.states, tape2);
  Eigen::MatrixXd up1 = Eigen::MatrixXd::Zero(q1.rows(), n);
  Eigen::MatrixXd up2 = Eigen::MatrixXd::Zero(q2.rows(), n);
  double loss = 0.0, q_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = batch.actions[static_cast<std::size_t>(i)];
    const double r1 = q1(a, i) - y(i);
    const double r2 = q2(a, i) - y(i);
    loss += 0.5 * inv_n * (r1 * r1 + r2 * r2);
    q_sum += 0.5 * (q1(a, i) + q2(a, i));
    up1(a, i) = inv_n * r1;
    up2(a, i) = inv_n * r2;
  }
  if (mean_q != nullptr) *mean_q = q_sum * inv_n;
  if (grads != nullptr) {
    agent.critic1.backward(tape1, up1, &grads->critic1);
    agent.critic2.backward(tape2, up2, &grads->critic2);
  }
  return loss;
}

double discrete_actor_loss(const DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacGrads* grads) {
  check_batch(agent, batch);
  const double inv_n = 1.0 / static_cast<double>(batch.states.cols());
  MlpTape tape;
  const Eigen::MatrixXd logits = agent.actor.forward(batch.states, tape);
  const Eigen::MatrixXd logp = log_softmax_columns(logits);
  const Eigen::ArrayXXd p = logp.array().exp();
  const Eigen::MatrixXd q_min = agent.critic1.forward(batch.states).cwiseMin(agent.critic2.forward(batch.states));
  const Eigen::ArrayXXd g = agent.alpha * logp.array() - q_min.array();
  const double loss = inv_n * (p * g).sum();
  if (grads != nullptr) {
    // d/dlogit_k of sum_a p_a g_a with g_a depending on p_a through log p_a:
    // p_k (g_k - sum_a p_a g_a); the extra alpha * sum p_a d(log p_a) term vanishes.
    const Eigen::RowVectorXd expected = (p * g).matrix().colwise().sum();
    const Eigen::MatrixXd d_logits = (inv_n * p * (g.rowwise() - expected.array())).matrix();
    agent.actor.backward(tape, d_logits, &grads->actor);
  }
  return loss;
}

DiscreteSacOptimizers make_discrete_sac_optimizers(const DiscreteSacAgent& agent, const SacConfig& config) {
  return {Adam(AdamConfig{config.actor_lr}, agent.actor.params()),
          Adam(AdamConfig{config.critic_lr}, agent.critic1.params()),
          Adam(AdamConfig{config.critic_lr}, agent.critic2.params())};
}

SacLossReport discrete_sac_update(DiscreteSacAgent& agent, const SacBatch& batch, DiscreteSacOptimizers& optimizers) {
  SacLossReport report;
  DiscreteSacGrads grads = zero_grads(agent);
  report.critic_loss = discrete_critic_loss(agent, batch, &grads, &report.mean_q);
  optimizers.critic1.step(agent.critic1.params(), grads.critic1);
  optimizers.critic2.step(agent.critic2.params(), grads.critic2);
  report.actor_loss = discrete_actor_loss(agent, batch, &grads);
  optimizers.actor.step(agent.actor.params(), grads.actor);
  polyak_update(agent.target1, agent.critic1, agent.tau);
  polyak_update(agent.target2, agent.critic2, agent.tau);
  return report;
}

}  // namespace tracerl
