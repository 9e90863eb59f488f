#include "tracerl/agent/training.hpp"

#include <algorithm>
#include <stdexcept>

#include "tracerl/agent/replay_buffer.hpp"

namespace tracerl {

namespace {

std::vector<const Transition*> gather(const ReplayBuffer& buffer, const std::vector<int>& idx) {
  std::vector<const Transition*> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(&buffer.slot(i));
  return out;
}

void check_consistency(const Environment& env, const TraceArtifacts& a) {
  const EnvSpec spec = env.spec();
  if (a.embedder.input_dim() != spec.state_dim) throw std::invalid_argument("run_training: embedder input != state_dim");
  if (a.table.action_count() != spec.action_count) {
    throw std::invalid_argument("run_training: embedding table rows != action count");
  }
  if (a.agent.state_dim() != a.embedder.output_dim() || a.model.state_dim() != a.embedder.output_dim()) {
    throw std::invalid_argument("run_training: state-embedding widths disagree");
  }
  if (a.agent.proto_dim() != a.table.dim() || a.model.action_dim() != a.table.dim()) {
    throw std::invalid_argument("run_training: action-embedding widths disagree");
  }
}

}  // namespace

TraceArtifacts make_trace_artifacts(const TraceShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  TraceArtifacts a;
  a.table = ActionEmbeddingTable::random(shape.action_count, shape.action_dim, rng, shape.embedding_init_scale);
  a.embedder = shape.embedder_mode == EmbedderMode::kIdentity
                   ? StateEmbedder::identity(shape.state_dim)
                   : StateEmbedder::learned(shape.state_dim, shape.state_embed_hiddens, shape.state_embed_dim, rng);
  const double bound = shape.proto_bound_factor * a.table.rows().cwiseAbs().maxCoeff();
  a.agent = SacAgent::create(a.embedder.output_dim(), shape.action_dim, shape.sac, bound, rng);
  TransitionModelConfig tcfg = shape.transition;
  tcfg.state_dim = a.embedder.output_dim();
  tcfg.action_dim = shape.action_dim;
  a.model = TransitionModel::create(tcfg, rng);
  return a;
}

TrainingCurve run_training(Environment& env, TraceArtifacts& artifacts, const TrainingConfig& config,
                           std::uint64_t seed, const EpisodeCallback& on_episode, TrainingSummary* summary) {
  check_consistency(env, artifacts);
  if (config.batch_size < 2) throw std::invalid_argument("run_training: batch_size must be >= 2");
  if (config.track_proto_bound < 0.0) throw std::invalid_argument("run_training: track_proto_bound must be >= 0");
  TrainingCurve curve;
  if (config.episodes <= 0) return curve;

  Rng env_rng(derive_seed(seed, "env"));
  Rng act_rng(derive_seed(seed, "act"));
  Rng update_rng(derive_seed(seed, "update"));

  auto& agent = artifacts.agent;
  auto& table = artifacts.table;
  auto& model = artifacts.model;
  auto& embedder = artifacts.embedder;
  const int d = table.dim();

  ReplayBuffer buffer(config.buffer_capacity);
  SacOptimizers sac_opt = make_sac_optimizers(agent, embedder, config.sac);
  EmbeddingOptimizers emb_opt = make_embedding_optimizers(model, table, config.embed_lr);
  const bool update_embeddings = !(model.frozen && table.frozen);
  // Slow copy of a learned embedder for bootstrap targets; rebuilt from the
  // online embedder on every call.
  StateEmbedder target_embedder = embedder;

  long total_steps = 0;
  for (int episode = 0; episode < config.episodes; ++episode) {
    Eigen::VectorXd state = env.reset(env_rng);
    EpisodeRecord record;
    bool done = false;
    while (!done) {
      Eigen::VectorXd proto(d);
      if (total_steps < config.warmup_steps) {
        for (int j = 0; j < d; ++j) proto(j) = act_rng.uniform(-agent.proto_bound, agent.proto_bound);
      } else {
        const Eigen::VectorXd noise = act_rng.normal_matrix(d, 1).col(0);
        proto = select_proto_action(agent, embedder.embed(state), true, noise).action;
      }
      const int action = nearest_action(table, proto);
      StepResult r = env.step(action);
      buffer.push({state, action, proto, r.reward, r.next_state, r.done && !r.truncated});
      record.episode_return += r.reward;
      ++record.steps;
      ++total_steps;
      done = r.done;
      state = std::move(r.next_state);

      if (total_steps > config.warmup_steps && static_cast<int>(buffer.size()) >= config.batch_size) {
        const SacBatch batch = make_sac_batch(gather(buffer, buffer.sample_indices(config.batch_size, update_rng)));
        SacNoise noise{update_rng.normal_matrix(d, config.batch_size), update_rng.normal_matrix(d, config.batch_size)};
        sac_update(agent, embedder, batch, sac_opt, noise, true, &target_embedder);

        if (update_embeddings) {
          const SacBatch eb = make_sac_batch(gather(buffer, buffer.sample_indices(config.batch_size, update_rng)));
          const EmbeddingBatch emb_batch{embedder.embed(eb.states), eb.actions, embedder.embed(eb.next_states)};
          const Eigen::MatrixXd z_noise = update_rng.normal_matrix(model.z_dim(), config.batch_size);
          train_embeddings_step(model, table, emb_batch, emb_opt, z_noise);
          if (config.track_proto_bound > 0.0 && !table.frozen) {
            agent.proto_bound =
                std::max(agent.proto_bound, config.track_proto_bound * table.rows().cwiseAbs().maxCoeff());
          }
        }
      }
    }
    curve.push_back(record);
    if (on_episode) on_episode(episode, record);
  }
  if (summary != nullptr) *summary = {static_cast<int>(curve.size()), total_steps, update_rng.state()};
  return curve;
}

TrainingCurve run_discrete_training(Environment& env, DiscreteSacAgent& agent, const TrainingConfig& config,
                                    std::uint64_t seed, const EpisodeCallback& on_episode, TrainingSummary* summary) {
  const EnvSpec spec = env.spec();
  if (agent.state_dim() != spec.state_dim || agent.action_count() != spec.action_count) {
    throw std::invalid_argument("run_discrete_training: agent shape does not match environment");
  }
  TrainingCurve curve;
  if (config.episodes <= 0) return curve;
  Rng env_rng(derive_seed(seed, "env"));
  Rng act_rng(derive_seed(seed, "act"));
  Rng update_rng(derive_seed(seed, "update"));
  ReplayBuffer buffer(config.buffer_capacity);
  DiscreteSacOptimizers opt = make_discrete_sac_optimizers(agent, config.sac);

  long total_steps = 0;
  for (int episode = 0; episode < config.episodes; ++episode) {
    Eigen::VectorXd state = env.reset(env_rng);
    EpisodeRecord record;
    bool done = false;
    while (!done) {
      const int action = total_steps < config.warmup_steps
                             ? act_rng.uniform_int(spec.action_count)
                             : select_discrete_action(agent, state, true, act_rng.uniform());
      StepResult r = env.step(action);
      buffer.push({state, action, Eigen::VectorXd(), r.reward, r.next_state, r.done && !r.truncated});
      record.episode_return += r.reward;
      ++record.steps;
      ++total_steps;
      done = r.done;
      state = std::move(r.next_state);
      if (total_steps > config.warmup_steps && static_cast<int>(buffer.size()) >= config.batch_size) {
        SacBatch batch = make_sac_batch(gather(buffer, buffer.sample_indices(config.batch_size, update_rng)));
        discrete_sac_update(agent, batch, opt);
      }
    }
    curve.push_back(record);
    if (on_episode) on_episode(episode, record);
  }
  if (summary != nullptr) *summary = {static_cast<int>(curve.size()), total_steps, update_rng.state()};
  return curve;
}

}  // namespace tracerl
