#include "tracerl/io/experiment.hpp"

#include <cstdlib>
#include <sstream>
#include <thread>

#include "tracerl/embedding/offline_fit.hpp"
#include "tracerl/log.hpp"
#include "tracerl/nn/rng.hpp"
#include "tracerl/transfer/transfer.hpp"

namespace tracerl {

namespace {

EpisodeCallback progress_logger(bool enabled, std::uint64_t seed, int budget) {
  if (!enabled) return {};
  return [seed, budget, sum = 0.0](int episode, const EpisodeRecord& r) mutable {
    sum += r.episode_return;
    if ((episode + 1) % 100 == 0 || episode + 1 == budget) {
      const int n = (episode % 100) + 1;
      log_info("seed " + std::to_string(seed) + " episode " + std::to_string(episode + 1) + "/" +
               std::to_string(budget) + " mean return " + std::to_string(sum / n));
      sum = 0.0;
    }
  };
}

TrainingConfig training_for(const ExperimentConfig& config) {
  TrainingConfig t = config.training;
  t.episodes = config.budget;
  t.sac = config.shape.sac;
  return t;
}

}  // namespace

SeedRun run_train_seed(const ExperimentConfig& config, std::uint64_t seed, bool progress) {
  auto env = make_environment(config.env);
  const TrainingConfig training = training_for(config);
  const auto log = progress_logger(progress, seed, config.budget);
  TrainingSummary summary;
  SeedRun run;
  switch (config.algorithm) {
    case Algorithm::kTrace:
    case Algorithm::kTraceNoTransfer: {
      TraceArtifacts a = make_trace_artifacts(config.shape, seed);
      run.curve = run_training(*env, a, training, seed, log, &summary);
      run.checkpoint = make_checkpoint(config, seed, a, summary);
      break;
    }
    case Algorithm::kSacDiscrete: {
      Rng rng(seed);
      DiscreteSacAgent agent =
          DiscreteSacAgent::create(config.shape.state_dim, config.shape.action_count, config.shape.sac, rng);
      run.curve = run_discrete_training(*env, agent, training, seed, log, &summary);
      run.checkpoint = make_checkpoint(config, seed, agent, summary);
      break;
    }
    case Algorithm::kBt:
      throw ConfigError("algorithm: bt needs a source checkpoint; use the transfer command");
  }
  return run;
}

SeedRun run_transfer_seed(const ExperimentConfig& config, const Checkpoint& source, std::uint64_t seed,
                          bool progress) {
  const ExperimentConfig source_config = checkpoint_config(source);
  if (source_config.env.family != config.env.family) {
    throw ConfigError("source checkpoint env family differs from the target config");
  }
  auto env = make_environment(config.env);
  const TrainingConfig training = training_for(config);
  const auto log = progress_logger(progress, seed, config.budget);
  TrainingSummary summary;
  SeedRun run;

  if (config.algorithm == Algorithm::kSacDiscrete) {
    throw ConfigError("algorithm: sac-discrete has no transfer path; use bt");
  }
  if (config.algorithm == Algorithm::kBt) {
    if (source.kind != CheckpointKind::kDiscrete) {
      throw ConfigError("bt transfer needs a sac-discrete source checkpoint");
    }
    const DiscreteSacAgent src = restore_discrete_agent(source);
    DiscreteSacAgent agent;
    try {
      agent = init_bt_target(src, env->spec(), config.shape.sac, seed);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("checkpoint/config mismatch: ") + e.what());
    }
    run.curve = run_discrete_training(*env, agent, training, seed, log, &summary);
    run.checkpoint = make_checkpoint(config, seed, agent, summary);
    return run;
  }

  if (source.kind != CheckpointKind::kTrace) throw ConfigError("trace transfer needs a trace source checkpoint");
  const TraceArtifacts src = restore_trace_artifacts(source);
  const TransferConfig flags = config.effective_transfer();
  TraceArtifacts target;
  try {
    target = config.shape.embedder_mode == EmbedderMode::kLearned
                 ? init_cross_domain_target(src, config.shape, flags, seed)
                 : init_same_domain_target(src, config.shape, flags, seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("checkpoint/config mismatch: ") + e.what());
  }
  run.curve = run_transfer(target, *env, training, seed, log, &summary);
  run.checkpoint = make_checkpoint(config, seed, target, summary);
  return run;
}

EmbedRun run_embed_seed(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.shape.embedder_mode != EmbedderMode::kIdentity) {
    throw ConfigError("sac.state_embed_dim: offline embedding runs on raw states; leave it null");
  }
  auto env = make_environment(config.env);
  TraceArtifacts a = make_trace_artifacts(config.shape, seed);
  EmbedRun run{a.table, {}, {}};
  run.data = collect_random_transitions(*env, config.embed.samples, derive_seed(seed, "collect"), nullptr,
                                        config.shape.action_dim);
  run.losses = fit_embeddings_offline(a.model, run.table, run.data, config.embed.fit, derive_seed(seed, "fit"));
  return run;
}

std::string expand_seed(const std::string& pattern, std::uint64_t seed) {
  std::string out = pattern;
  const std::string token = "{seed}";
  for (auto pos = out.find(token); pos != std::string::npos; pos = out.find(token, pos)) {
    out.replace(pos, token.size(), std::to_string(seed));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("--seeds: empty entry in '" + text + "'");
    item = item.substr(first, last - first + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("--seeds: '" + item + "' is not a non-negative integer");
    }
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw ConfigError("--seeds: no seeds given");
  return seeds;
}

int worker_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRACE_RL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) {
      n = v;
    } else {
      log_warning(std::string("TRACE_RL_THREADS='") + env + "' ignored; expected a positive integer");
    }
  }
  return n < 1 ? 1 : n;
}

}  // namespace tracerl
