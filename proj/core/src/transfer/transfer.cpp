#include "tracerl/transfer/transfer.hpp"

#include <stdexcept>

namespace tracerl {

namespace {

void copy_policy(const SacAgent& from, SacAgent& to) {
  if (from.state_dim() != to.state_dim() || from.proto_dim() != to.proto_dim()) {
    throw std::invalid_argument("policy transfer: source and target policy shapes differ");
  }
  to.actor = from.actor;
  to.critic1 = from.critic1;
  to.critic2 = from.critic2;
  to.target1 = from.target1;
  to.target2 = from.target2;
}

void copy_transition(const TransitionModel& from, TransitionModel& to, bool freeze) {
  if (from.state_dim() != to.state_dim() || from.action_dim() != to.action_dim() || from.latent() != to.latent()) {
    throw std::invalid_argument("transition transfer: source and target model shapes differ");
  }
  to = from;
  to.frozen = freeze;
}

void apply(const TraceArtifacts& source, TraceArtifacts& target, const TransferConfig& config) {
  if (config.transfer_policy) copy_policy(source.agent, target.agent);
  if (config.transfer_transition) copy_transition(source.model, target.model, config.freeze_transition);
}

void reject_bt(const TransferConfig& config) {
  if (config.baseline == Baseline::kBt) {
    throw std::invalid_argument("the BT baseline has no embedding artifacts; use init_bt_target");
  }
}

}  // namespace

std::string to_string(Baseline b) { return b == Baseline::kBt ? "bt" : "none"; }

Baseline baseline_from_string(const std::string& name) {
  if (name == "none") return Baseline::kNone;
  if (name == "bt") return Baseline::kBt;
  throw std::invalid_argument("unknown baseline '" + name + "' (expected none or bt)");
}

void TransferConfig::validate() const {
  if (freeze_transition && !transfer_transition) {
    throw std::invalid_argument("freeze_transition requires transfer_transition");
  }
  if (baseline == Baseline::kBt && (transfer_policy || transfer_transition)) {
    throw std::invalid_argument("the BT baseline excludes transfer_policy and transfer_transition");
  }
}

TraceArtifacts init_same_domain_target(const TraceArtifacts& source, const TraceShape& target,
                                       const TransferConfig& config, std::uint64_t seed) {
  config.validate();
  reject_bt(config);
  if (source.embedder.learned() || target.embedder_mode != EmbedderMode::kIdentity) {
    throw std::invalid_argument("same-domain transfer requires identity state embedders");
  }
  if (source.embedder.input_dim() != target.state_dim) {
    throw std::invalid_argument("same-domain transfer: state_dim " + std::to_string(source.embedder.input_dim()) +
                                " != " + std::to_string(target.state_dim) + "; use the cross-domain path");
  }
  if (source.table.dim() != target.action_dim) {
    throw std::invalid_argument("same-domain transfer: action embedding width differs from the source");
  }
  TraceArtifacts out = make_trace_artifacts(target, seed);
  apply(source, out, config);
  return out;
}

TraceArtifacts init_cross_domain_target(const TraceArtifacts& source, const TraceShape& target,
                                        const TransferConfig& config, std::uint64_t seed) {
  config.validate();
  reject_bt(config);
  if (!source.embedder.learned() || target.embedder_mode != EmbedderMode::kLearned) {
    throw std::invalid_argument("cross-domain transfer requires learned state embedders on both sides");
  }
  if (source.embedder.output_dim() != target.state_embed_dim) {
    throw std::invalid_argument("cross-domain transfer: common-space width " +
                                std::to_string(source.embedder.output_dim()) + " != " +
                                std::to_string(target.state_embed_dim));
  }
  if (source.table.dim() != target.action_dim) {
    throw std::invalid_argument("cross-domain transfer: action embedding width differs from the source");
  }
  TraceArtifacts out = make_trace_artifacts(target, seed);
  apply(source, out, config);
  return out;
}

DiscreteSacAgent init_bt_target(const DiscreteSacAgent& source, const EnvSpec& target, const SacConfig& config,
                                std::uint64_t seed) {
  Rng rng(seed);
  DiscreteSacAgent out = DiscreteSacAgent::create(target.state_dim, target.action_count, config, rng);
  const auto copy_hidden = [](const Mlp& from, Mlp& to) {
    if (from.num_layers() != to.num_layers()) throw std::invalid_argument("BT: hidden stacks differ in depth");
    for (int l = 1; l + 1 < to.num_layers(); ++l) {
      if (from.weight(l).rows() != to.weight(l).rows() || from.weight(l).cols() != to.weight(l).cols()) {
        throw std::invalid_argument("BT: hidden layer " + std::to_string(l) + " widths differ");
      }
      to.weight(l) = from.weight(l);
      to.bias(l) = from.bias(l);
    }
  };
  copy_hidden(source.actor, out.actor);
  copy_hidden(source.critic1, out.critic1);
  copy_hidden(source.critic2, out.critic2);
  out.target1 = out.critic1;
  out.target2 = out.critic2;
  return out;
}

TrainingCurve run_transfer(TraceArtifacts& target, Environment& env, const TrainingConfig& config,
                           std::uint64_t seed, const EpisodeCallback& on_episode, TrainingSummary* summary) {
  return run_training(env, target, config, seed, on_episode, summary);
}

}  // namespace tracerl
