// End-to-end runs of the command-line binary.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>

#include "tracerl/io/checkpoint.hpp"
#include "tracerl/io/results.hpp"

#ifndef TRACERL_CLI_PATH
#define TRACERL_CLI_PATH ""
#endif

namespace tracerl {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (std::string(TRACERL_CLI_PATH).empty()) GTEST_SKIP() << "CLI not built";
    dir_ = fs::temp_directory_path() / ("tracerl_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    if (!dir_.empty()) fs::remove_all(dir_);
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(TRACERL_CLI_PATH) + " -q " + args + " > " + (dir_ / "log.txt").string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string write_config(const std::string& name, const std::string& body) const {
    const std::string path = (dir_ / name).string();
    write_file(path, body);
    return path;
  }

  fs::path dir_;
};

constexpr const char* kTrain = R"({
  "env": {"family": "gridworld", "n_steps": 1},
  "algorithm": "trace",
  "sac": {"ac_hiddens": [8, 8], "actor_lr": 0.001},
  "transition_model": {"hiddens": [8]},
  "training": {"warmup_steps": 20, "batch_size": 8},
  "seeds": [1, 2, 3],
  "budget": 4,
  "output_dir": "unused"
})";

TEST_F(Cli, TrainWritesPerSeedOutputsAndManifestReproduces) {
  const std::string cfg = write_config("train.json", kTrain);
  const fs::path out = dir_ / "a";
  ASSERT_EQ(run("train --config " + cfg + " --out " + out.string()), 0);
  for (int s = 1; s <= 3; ++s) {
    const fs::path seed = out / ("seed_" + std::to_string(s));
    ASSERT_TRUE(fs::exists(seed / "curve.csv"));
    ASSERT_TRUE(fs::exists(seed / "checkpoint.bin"));
    EXPECT_EQ(load_curve_csv((seed / "curve.csv").string()).size(), 4u);
  }
  ASSERT_TRUE(fs::exists(out / "manifest.json"));

  const fs::path again = dir_ / "b";
  ASSERT_EQ(run("train --config " + (out / "manifest.json").string() + " --out " + again.string()), 0);
  for (int s = 1; s <= 3; ++s) {
    const std::string rel = "seed_" + std::to_string(s);
    EXPECT_EQ(read_file((again / rel / "curve.csv").string()), read_file((out / rel / "curve.csv").string()));
    const Checkpoint x = load_checkpoint((out / rel / "checkpoint.bin").string());
    const Checkpoint y = load_checkpoint((again / rel / "checkpoint.bin").string());
    ASSERT_EQ(x.arrays.size(), y.arrays.size());
    for (std::size_t i = 0; i < x.arrays.size(); ++i) EXPECT_EQ(x.arrays[i].value, y.arrays[i].value);
    EXPECT_EQ(x.rng_state, y.rng_state);
  }
}

TEST_F(Cli, TransferFromTrainedSource) {
  const std::string cfg = write_config("train.json", kTrain);
  const fs::path src = dir_ / "src";
  ASSERT_EQ(run("train --config " + cfg + " --seeds 1 --out " + src.string()), 0);
  const std::string target = write_config("target.json", R"({
    "env": {"family": "gridworld", "n_steps": 2},
    "algorithm": "trace",
    "sac": {"ac_hiddens": [8, 8], "actor_lr": 0.001},
    "transition_model": {"hiddens": [8]},
    "training": {"warmup_steps": 20, "batch_size": 8},
    "seeds": [1],
    "budget": 2,
    "output_dir": "unused"
  })");
  const fs::path out = dir_ / "tgt";
  ASSERT_EQ(run("transfer --config " + target + " --source-checkpoint " + (src / "seed_{seed}/checkpoint.bin").string() +
                " --out " + out.string()),
            0);
  EXPECT_EQ(load_curve_csv((out / "seed_1/curve.csv").string()).size(), 2u);
  // A source that does not exist is a runtime failure.
  EXPECT_EQ(run("transfer --config " + target + " --source-checkpoint " + (dir_ / "missing.bin").string() +
                " --out " + out.string()),
            3);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  const std::string bad = write_config("bad.json", R"({"env": {"family": "gridworld"}, "algorithm": "trace"})");
  EXPECT_EQ(run("train --config " + bad), 2);
  EXPECT_EQ(run("train --config " + (dir_ / "nope.json").string()), 2);
  EXPECT_EQ(run("train"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  const std::string cfg = write_config("train.json", kTrain);
  EXPECT_EQ(run("train --config " + cfg + " --seeds 1,x"), 2);
}

TEST_F(Cli, EmbedAndAnalyze) {
  const std::string cfg = write_config("embed.json", R"({
    "env": {"family": "gridworld", "n_steps": 2},
    "algorithm": "trace",
    "transition_model": {"hiddens": [8]},
    "embed": {"samples": 200, "epochs": 2, "batch_size": 16},
    "seeds": [5],
    "budget": 0,
    "output_dir": "unused"
  })");
  const fs::path out = dir_ / "emb";
  ASSERT_EQ(run("embed --config " + cfg + " --out " + out.string()), 0);
  const fs::path table = out / "seed_5/embedding.csv";
  ASSERT_TRUE(fs::exists(table));
  const fs::path report = dir_ / "report";
  ASSERT_EQ(run("analyze --table " + table.string() + " --gridworld-steps 2 --out " + report.string()), 0);
  EXPECT_TRUE(fs::exists(report / "report.json"));
  EXPECT_TRUE(fs::exists(report / "table_0_pca.csv"));
}

}  // namespace
}  // namespace tracerl
