#include "tracerl/io/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "tracerl/analysis/curves.hpp"
#include "tracerl/analysis/embedding_metrics.hpp"
#include "tracerl/analysis/pca.hpp"
#include "tracerl/io/experiment.hpp"
#include "tracerl/io/results.hpp"
#include "tracerl/log.hpp"

namespace tracerl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Runs job(seed) for every seed on up to `threads` workers; the first
// exception (in seed order) is rethrown after all workers join.
void for_each_seed(const std::vector<std::uint64_t>& seeds, int threads,
                   const std::function<void(std::uint64_t)>& job) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        job(seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int guarded(const char* command, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "tracerl " << command << ": config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "tracerl " << command << ": " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
}

ExperimentConfig resolve(const CommandOptions& o) {
  if (o.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.seeds) cfg.seeds = *o.seeds;
  if (!o.source_checkpoint.empty()) cfg.source_checkpoint = o.source_checkpoint;
  return cfg;
}

std::string seed_dir(const ExperimentConfig& cfg, std::uint64_t seed) {
  const fs::path dir = fs::path(cfg.output_dir) / ("seed_" + std::to_string(seed));
  fs::create_directories(dir);
  return dir.string();
}

void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                    const std::map<std::uint64_t, std::vector<std::string>>& outputs) {
  json files = json::object();
  for (const auto& [seed, list] : outputs) files[std::to_string(seed)] = list;
  json m = {{"manifest_version", 1},
            {"command", command},
            {"tracerl_version", TRACERL_VERSION},
            {"config", json::parse(config_to_json(cfg))},
            {"outputs", files}};
  if (!cfg.source_checkpoint.empty()) m["source_checkpoint"] = cfg.source_checkpoint;
  fs::create_directories(cfg.output_dir);
  write_file((fs::path(cfg.output_dir) / "manifest.json").string(), m.dump(2) + "\n");
}

int threads_for(const CommandOptions& o) { return o.threads > 0 ? o.threads : worker_threads(); }

}  // namespace

int cmd_train(const CommandOptions& options) {
  return guarded("train", [&] {
    const ExperimentConfig cfg = resolve(options);
    std::mutex mu;
    std::map<std::uint64_t, std::vector<std::string>> outputs;
    for_each_seed(cfg.seeds, threads_for(options), [&](std::uint64_t seed) {
      const SeedRun run = run_train_seed(cfg, seed, !quiet());
      const std::string dir = seed_dir(cfg, seed);
      save_curve_csv(dir + "/curve.csv", run.curve);
      save_checkpoint(dir + "/checkpoint.bin", run.checkpoint);
      std::lock_guard lock(mu);
      outputs[seed] = {dir + "/curve.csv", dir + "/checkpoint.bin"};
    });
    write_manifest(cfg, "train", outputs);
  });
}

int cmd_transfer(const CommandOptions& options) {
  return guarded("transfer", [&] {
    const ExperimentConfig cfg = resolve(options);
    if (cfg.source_checkpoint.empty()) throw ConfigError("--source-checkpoint is required for transfer");
    std::mutex mu;
    std::map<std::uint64_t, std::vector<std::string>> outputs;
    for_each_seed(cfg.seeds, threads_for(options), [&](std::uint64_t seed) {
      const Checkpoint source = load_checkpoint(expand_seed(cfg.source_checkpoint, seed));
      const SeedRun run = run_transfer_seed(cfg, source, seed, !quiet());
      const std::string dir = seed_dir(cfg, seed);
      save_curve_csv(dir + "/curve.csv", run.curve);
      save_checkpoint(dir + "/checkpoint.bin", run.checkpoint);
      std::lock_guard lock(mu);
      outputs[seed] = {dir + "/curve.csv", dir + "/checkpoint.bin"};
    });
    write_manifest(cfg, "transfer", outputs);
  });
}

int cmd_embed(const CommandOptions& options) {
  return guarded("embed", [&] {
    const ExperimentConfig cfg = resolve(options);
    std::mutex mu;
    std::map<std::uint64_t, std::vector<std::string>> outputs;
    for_each_seed(cfg.seeds, threads_for(options), [&](std::uint64_t seed) {
      const EmbedRun run = run_embed_seed(cfg, seed);
      const std::string dir = seed_dir(cfg, seed);
      std::vector<std::string> files{dir + "/embedding.csv", dir + "/loss_history.csv"};
      save_embedding_csv(files[0], run.table);
      save_loss_csv(files[1], run.losses);
      if (cfg.embed.save_transitions) {
        files.push_back(dir + "/transitions.jsonl");
        save_transitions(files.back(), run.data);
      }
      if (!run.losses.empty()) {
        log_info("seed " + std::to_string(seed) + " final embedding loss " + format_double(run.losses.back()));
      }
      std::lock_guard lock(mu);
      outputs[seed] = files;
    });
    write_manifest(cfg, "embed", outputs);
  });
}

int cmd_analyze(const AnalyzeOptions& o) {
  return guarded("analyze", [&] {
    if (o.tables.empty() && o.curves.empty()) throw ConfigError("analyze needs --table and/or --curve inputs");
    if (o.out_dir.empty()) throw ConfigError("--out is required for analyze");
    if (o.window < 1) throw ConfigError("--window must be at least 1");
    fs::create_directories(o.out_dir);
    json report = json::object();

    json tables = json::array();
    for (std::size_t i = 0; i < o.tables.size(); ++i) {
      const ActionEmbeddingTable table = load_embedding_csv(o.tables[i]);
      json entry = {{"path", o.tables[i]}};
      const int k = std::min<int>(o.pca_components, table.dim());
      if (k >= 1 && table.dim() <= table.action_count()) {
        const ProjectionResult p = pca_project(table.rows(), k);
        entry["explained_variance_ratio"] = std::vector<double>(
            p.explained_variance_ratio.data(), p.explained_variance_ratio.data() + p.explained_variance_ratio.size());
        std::string csv = "action_index";
        for (int c = 0; c < k; ++c) csv += ",pc_" + std::to_string(c);
        csv += "\n";
        for (Eigen::Index r = 0; r < p.projected.rows(); ++r) {
          csv += std::to_string(r);
          for (int c = 0; c < k; ++c) csv += "," + format_double(p.projected(r, c));
          csv += "\n";
        }
        write_file((fs::path(o.out_dir) / ("table_" + std::to_string(i) + "_pca.csv")).string(), csv);
      }
      if (o.gridworld_steps > 0) {
        GridworldConfig g;
        g.n_steps = o.gridworld_steps;
        g.validate();
        if (g.action_count() != table.action_count()) {
          throw ConfigError(o.tables[i] + ": table has " + std::to_string(table.action_count()) +
                            " rows, a " + std::to_string(g.n_steps) + "-step gridworld has " +
                            std::to_string(g.action_count()));
        }
        const DisplacementGroups groups = displacement_groups(g);
        const ClusterQuality q = cluster_quality(table.rows(), groups.labels);
        entry["groups"] = groups.group_count();
        entry["cluster_quality"] = {{"intra_mean", q.intra_mean}, {"inter_mean", q.inter_mean}, {"ratio", q.ratio}};
        if (g.n_steps == 3) {
          const GridAnalogy a = three_step_up_analogy();
          entry["analogy_up3"] =
              analogy_check(table.rows(), a.plus, a.minus, groups.label_of(a.expected_displacement), groups.fn());
        }
      }
      if (o.monotonic) entry["spearman_rho"] = monotonicity_check(table.rows());
      tables.push_back(entry);
    }
    if (!o.tables.empty()) report["tables"] = tables;

    if (!o.curves.empty()) {
      CurveEnsemble ensemble;
      json per = json::array();
      std::vector<double> ett_values;
      for (const auto& path : o.curves) {
        const auto returns = returns_of(load_curve_csv(path));
        const auto ett = episodes_to_threshold(returns, o.threshold, o.window);
        ett_values.push_back(ett ? *ett : static_cast<double>(returns.size() + 1));
        per.push_back({{"path", path},
                       {"episodes", returns.size()},
                       {"episodes_to_threshold", ett ? json(*ett) : json(nullptr)},
                       {"final_mean", returns.empty() ? json(nullptr) : json(tail_mean(returns, o.window))}});
        ensemble.push_back(returns);
      }
      const BootstrapBand band = bootstrap_band(ensemble, o.confidence, o.resamples, o.seed);
      std::string csv = "episode,mean,low,high\n";
      for (std::size_t e = 0; e < band.mean.size(); ++e) {
        csv += std::to_string(e + 1) + "," + format_double(band.mean[e]) + "," + format_double(band.low[e]) + "," +
               format_double(band.high[e]) + "\n";
      }
      write_file((fs::path(o.out_dir) / "curve_band.csv").string(), csv);
      report["curves"] = {{"runs", per},
                          {"threshold", o.threshold},
                          {"window", o.window},
                          {"median_episodes_to_threshold", median(ett_values)}};
    }
    write_file((fs::path(o.out_dir) / "report.json").string(), report.dump(2) + "\n");
  });
}

}  // namespace tracerl
