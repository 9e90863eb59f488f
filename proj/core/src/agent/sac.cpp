#include "tracerl/agent/sac.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tracerl/nn/gaussian.hpp"

namespace tracerl {

namespace {

std::vector<int> stack(int in, const std::vector<int>& hiddens, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hiddens.begin(), hiddens.end());
  sizes.push_back(out);
  return sizes;
}

Eigen::MatrixXd concat_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// log(1 - tanh(u)^2), evaluated without cancellation.
Eigen::ArrayXXd log_one_minus_tanh_sq(const Eigen::ArrayXXd& u) {
  const Eigen::ArrayXXd x = -2.0 * u;
  const Eigen::ArrayXXd softplus = x.max(0.0) + (-x.abs()).exp().log1p();
  return 2.0 * (std::numbers::ln2 - u - softplus);
}

// Tanh-squashed diagonal Gaussian sample for a batch of actor outputs.
struct Squashed {
  Eigen::MatrixXd action;     // B * tanh(u)
  Eigen::RowVectorXd log_prob;
  Eigen::ArrayXXd tanh_u;
  Eigen::ArrayXXd sigma;
  Eigen::MatrixXd raw_log_sigma;
};

Squashed squash(const Eigen::MatrixXd& actor_out, const Eigen::MatrixXd& noise, double bound) {
  const Eigen::Index d = actor_out.rows() / 2;
  if (noise.rows() != d || noise.cols() != actor_out.cols()) {
    throw std::invalid_argument("SAC: noise must be proto_dim x batch");
  }
  Squashed s;
  s.raw_log_sigma = actor_out.bottomRows(d);
  const Eigen::ArrayXXd log_sigma = clamp_log_sigma(s.raw_log_sigma).array();
  s.sigma = log_sigma.exp();
  const Eigen::ArrayXXd u = actor_out.topRows(d).array() + s.sigma * noise.array();
  s.tanh_u = u.tanh();
  s.action = (bound * s.tanh_u).matrix();
  s.log_prob = (-0.5 * noise.array().square() - log_sigma - 0.5 * kLogTwoPi - std::log(bound) -
                log_one_minus_tanh_sq(u))
                   .matrix()
                   .colwise()
                   .sum();
  return s;
}

// Gradient w.r.t. the actor output given dL/d(action) and dL/d(log_prob).
Eigen::MatrixXd squash_backward(const Squashed& s, const Eigen::MatrixXd& noise, const Eigen::MatrixXd& d_action,
                                const Eigen::RowVectorXd& d_log_prob, double bound) {
  const Eigen::Index d = noise.rows();
  const Eigen::ArrayXXd dlp = d_log_prob.replicate(d, 1).array();
  const Eigen::ArrayXXd du = d_action.array() * bound * (1.0 - s.tanh_u.square()) + dlp * 2.0 * s.tanh_u;
  Eigen::MatrixXd out(2 * d, noise.cols());
  out.topRows(d) = du.matrix();
  out.bottomRows(d) =
      ((du * s.sigma * noise.array() - dlp) * clamp_log_sigma_mask(s.raw_log_sigma).array()).matrix();
  return out;
}

void check_batch(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch) {
  const Eigen::Index n = batch.states.cols();
  if (n < 2) throw std::invalid_argument("SAC: batch must hold at least 2 transitions");
  if (embedder.output_dim() != agent.state_dim()) throw std::invalid_argument("SAC: embedder width != actor input");
  if (batch.proto_actions.rows() != agent.proto_dim() || batch.proto_actions.cols() != n ||
      batch.next_states.cols() != n || batch.rewards.size() != n || batch.dones.size() != n) {
    throw std::invalid_argument("SAC: inconsistent batch shapes");
  }
}

}  // namespace

SacAgent SacAgent::create(int state_dim, int proto_dim, const SacConfig& config, double proto_bound, Rng& rng) {
  if (!(proto_bound > 0.0)) throw std::invalid_argument("SacAgent: proto_bound must be positive");
  if (config.tau < 0.0 || config.tau > 1.0) throw std::invalid_argument("SacAgent: tau must lie in [0, 1]");
  SacAgent a;
  a.actor = Mlp::glorot(stack(state_dim, config.hiddens, 2 * proto_dim), Activation::kRelu, Activation::kLinear, rng);
  a.critic1 = Mlp::glorot(stack(state_dim + proto_dim, config.hiddens, 1), Activation::kRelu, Activation::kLinear, rng);
  a.critic2 = Mlp::glorot(stack(state_dim + proto_dim, config.hiddens, 1), Activation::kRelu, Activation::kLinear, rng);
  a.target1 = a.critic1;
  a.target2 = a.critic2;
  a.alpha = config.alpha;
  a.gamma = config.gamma;
  a.tau = config.tau;
  a.proto_bound = proto_bound;
  return a;
}

ProtoAction select_proto_action(const SacAgent& agent, const Eigen::VectorXd& state_emb, bool stochastic,
                                const Eigen::VectorXd& noise) {
  if (state_emb.size() != agent.state_dim()) {
    throw std::invalid_argument("select_proto_action: expected state width " + std::to_string(agent.state_dim()));
  }
  const Eigen::MatrixXd out = agent.actor.forward(Eigen::MatrixXd(state_emb));
  const Eigen::MatrixXd eps = stochastic ? Eigen::MatrixXd(noise) : Eigen::MatrixXd::Zero(agent.proto_dim(), 1);
  const Squashed s = squash(out, eps, agent.proto_bound);
  return {s.action.col(0), s.log_prob(0)};
}

int nearest_action(const ActionEmbeddingTable& table, const Eigen::VectorXd& proto) {
  if (table.action_count() == 0) throw std::invalid_argument("nearest_action: empty table");
  if (proto.size() != table.dim()) throw std::invalid_argument("nearest_action: proto-action width != table dim");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < table.action_count(); ++i) {
    const double d = (table.rows().row(i).transpose() - proto).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

SacBatch make_sac_batch(const std::vector<const Transition*>& transitions) {
  if (transitions.empty()) throw std::invalid_argument("make_sac_batch: empty batch");
  const auto n = static_cast<Eigen::Index>(transitions.size());
  const auto& first = *transitions.front();
  SacBatch b;
  b.states.resize(first.state.size(), n);
  b.next_states.resize(first.next_state.size(), n);
  b.proto_actions.resize(first.proto_action.size(), n);
  b.rewards.resize(n);
  b.dones.resize(n);
  b.actions.resize(transitions.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = *transitions[static_cast<std::size_t>(i)];
    b.states.col(i) = t.state;
    b.next_states.col(i) = t.next_state;
    b.proto_actions.col(i) = t.proto_action;
    b.rewards(i) = t.reward;
    b.dones(i) = t.done ? 1.0 : 0.0;
    b.actions[static_cast<std::size_t>(i)] = t.action_index;
  }
  return b;
}

SacGrads zero_grads(const SacAgent& agent, const StateEmbedder& embedder) {
  SacGrads g;
  g.actor = zeros_like(agent.actor.params());
  g.critic1 = zeros_like(agent.critic1.params());
  g.critic2 = zeros_like(agent.critic2.params());
  if (embedder.learned()) g.embedder = zeros_like(embedder.net().params());
  return g;
}

Eigen::RowVectorXd sac_soft_targets(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                                    const Eigen::MatrixXd& next_noise) {
  check_batch(agent, embedder, batch);
  const Eigen::MatrixXd next_emb = embedder.embed(batch.next_states);
  const Squashed next = squash(agent.actor.forward(next_emb), next_noise, agent.proto_bound);
  const Eigen::MatrixXd next_in = concat_rows(next_emb, next.action);
  const Eigen::RowVectorXd target_q = agent.target1.forward(next_in).cwiseMin(agent.target2.forward(next_in));
  return batch.rewards.array() +
         agent.gamma * (1.0 - batch.dones.array()) * (target_q.array() - agent.alpha * next.log_prob.array());
}

double sac_critic_loss(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                       const Eigen::RowVectorXd& y, SacGrads* grads, double* mean_q) {
  check_batch(agent, embedder, batch);
  const Eigen::Index n = batch.states.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (y.size() != n) throw std::invalid_argument("sac_critic_loss: one target per transition required");

  MlpTape emb_tape, tape1, tape2;
  const Eigen::MatrixXd emb = embedder.embed(batch.states, emb_tape);
  const Eigen::MatrixXd in = concat_rows(emb, batch.proto_actions);
  const Eigen::RowVectorXd q1 = agent.critic1.forward(in, tape1);
  const Eigen::RowVectorXd q2 = agent.critic2.forward(in, tape2);
  const Eigen::RowVectorXd r1 = q1 - y;
  const Eigen::RowVectorXd r2 = q2 - y;
  if (mean_q != nullptr) *mean_q = 0.5 * (q1.mean() + q2.mean());
  const double loss = 0.5 * inv_n * (r1.squaredNorm() + r2.squaredNorm());

  if (grads != nullptr) {
    Eigen::MatrixXd din = agent.critic1.backward(tape1, inv_n * r1, &grads->critic1);
    din += agent.critic2.backward(tape2, inv_n * r2, &grads->critic2);
    if (embedder.learned()) embedder.backward(emb_tape, din.topRows(agent.state_dim()), grads->embedder);
  }
  return loss;
}

double sac_actor_loss(const SacAgent& agent, const StateEmbedder& embedder, const SacBatch& batch,
                      const Eigen::MatrixXd& noise, SacGrads* grads) {
  check_batch(agent, embedder, batch);
  const Eigen::Index n = batch.states.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const int m = agent.state_dim();

  MlpTape emb_tape, actor_tape, tape1, tape2;
  const Eigen::MatrixXd emb = embedder.embed(batch.states, emb_tape);
  const Eigen::MatrixXd actor_out = agent.actor.forward(emb, actor_tape);
  const Squashed s = squash(actor_out, noise, agent.proto_bound);
  const Eigen::MatrixXd in = concat_rows(emb, s.action);
  const Eigen::RowVectorXd q1 = agent.critic1.forward(in, tape1);
  const Eigen::RowVectorXd q2 = agent.critic2.forward(in, tape2);
  const Eigen::RowVectorXd q_min = q1.cwiseMin(q2);
  const double loss = inv_n * (agent.alpha * s.log_prob - q_min).sum();

  if (grads != nullptr) {
    const Eigen::RowVectorXd pick1 = (q1.array() <= q2.array()).cast<double>().matrix();
    const Eigen::RowVectorXd pick2 = Eigen::RowVectorXd::Ones(n) - pick1;
    Eigen::MatrixXd din = agent.critic1.backward(tape1, -inv_n * pick1, nullptr);
    din += agent.critic2.backward(tape2, -inv_n * pick2, nullptr);
    const Eigen::RowVectorXd d_log_prob = Eigen::RowVectorXd::Constant(n, agent.alpha * inv_n);
    const Eigen::MatrixXd d_out = squash_backward(s, noise, din.bottomRows(agent.proto_dim()), d_log_prob,
                                                  agent.proto_bound);
    Eigen::MatrixXd d_emb = agent.actor.backward(actor_tape, d_out, &grads->actor);
    d_emb += din.topRows(m);
    if (embedder.learned() && !grads->embedder.empty()) embedder.backward(emb_tape, d_emb, grads->embedder);
  }
  return loss;
}

SacOptimizers make_sac_optimizers(const SacAgent& agent, const StateEmbedder& embedder, const SacConfig& config) {
  SacOptimizers opt;
  opt.actor = Adam(AdamConfig{config.actor_lr}, agent.actor.params());
  opt.critic1 = Adam(AdamConfig{config.critic_lr}, agent.critic1.params());
  opt.critic2 = Adam(AdamConfig{config.critic_lr}, agent.critic2.params());
  const ParamList none;
  opt.embedder = Adam(AdamConfig{config.state_embed_lr}, embedder.learned() ? embedder.net().params() : none);
  return opt;
}

SacLossReport sac_update(SacAgent& agent, StateEmbedder& embedder, const SacBatch& batch, SacOptimizers& optimizers,
                         const SacNoise& noise, bool embedder_trainable, StateEmbedder* target_embedder) {
  SacLossReport report;
  SacGrads grads = zero_grads(agent, embedder);
  const Eigen::RowVectorXd targets =
      sac_soft_targets(agent, target_embedder != nullptr ? *target_embedder : embedder, batch, noise.next_action);
  report.critic_loss = sac_critic_loss(agent, embedder, batch, targets, &grads, &report.mean_q);
  optimizers.critic1.step(agent.critic1.params(), grads.critic1);
  optimizers.critic2.step(agent.critic2.params(), grads.critic2);

  // Actor gradients stop at the embedder. When they flow through, the actor
  // reshapes the shared features to inflate Q and training collapses.
  SacGrads actor_grads;
  actor_grads.actor = zeros_like(agent.actor.params());
  report.actor_loss = sac_actor_loss(agent, embedder, batch, noise.action, &actor_grads);
  optimizers.actor.step(agent.actor.params(), actor_grads.actor);

  if (embedder.learned() && embedder_trainable) optimizers.embedder.step(embedder.net().params(), grads.embedder);

  polyak_update(agent.target1, agent.critic1, agent.tau);
  polyak_update(agent.target2, agent.critic2, agent.tau);
  if (target_embedder != nullptr && embedder.learned()) polyak_update(target_embedder->net(), embedder.net(), agent.tau);
  return report;
}

}  // namespace tracerl
