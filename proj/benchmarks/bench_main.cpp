#include <benchmark/benchmark.h>

#include "tracerl/agent/sac.hpp"
#include "tracerl/embedding/transition_model.hpp"
#include "tracerl/env/gridworld.hpp"

namespace tracerl {
namespace {

void BM_MlpForward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Rng rng(1);
  const Mlp m = Mlp::glorot({44, 200, 100, 4}, Activation::kRelu, Activation::kLinear, rng);
  const Eigen::MatrixXd x = rng.normal_matrix(44, batch);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(128);

void BM_MlpBackward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Rng rng(2);
  const Mlp m = Mlp::glorot({44, 200, 100, 4}, Activation::kRelu, Activation::kLinear, rng);
  const Eigen::MatrixXd x = rng.normal_matrix(44, batch);
  const Eigen::MatrixXd up = rng.normal_matrix(4, batch);
  for (auto _ : state) {
    MlpTape tape;
    m.forward(x, tape);
    ParamGrads g = zeros_like(m.params());
    benchmark::DoNotOptimize(m.backward(tape, up, &g));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpBackward)->Arg(1)->Arg(128);

// One full update (critic, actor, targets) at the default network widths.
void BM_SacUpdate(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Rng rng(3);
  SacConfig cfg;
  SacAgent agent = SacAgent::create(4, 2, cfg, 0.5, rng);
  StateEmbedder embedder = StateEmbedder::identity(4);
  SacOptimizers opt = make_sac_optimizers(agent, embedder, cfg);
  SacBatch b;
  b.states = rng.normal_matrix(4, batch);
  b.next_states = rng.normal_matrix(4, batch);
  b.proto_actions = 0.1 * rng.normal_matrix(2, batch);
  b.rewards = Eigen::RowVectorXd::Constant(batch, -0.05);
  b.dones = Eigen::RowVectorXd::Zero(batch);
  b.actions.assign(batch, 0);
  const SacNoise noise{rng.normal_matrix(2, batch), rng.normal_matrix(2, batch)};
  for (auto _ : state) benchmark::DoNotOptimize(sac_update(agent, embedder, b, opt, noise));
}
BENCHMARK(BM_SacUpdate)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_NearestAction(benchmark::State& state) {
  const int actions = static_cast<int>(state.range(0));
  Rng rng(4);
  const ActionEmbeddingTable table = ActionEmbeddingTable::random(actions, 4, rng, 1.0);
  const Eigen::VectorXd q = rng.normal_matrix(4, 1).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(nearest_action(table, q));
}
BENCHMARK(BM_NearestAction)->Arg(4)->Arg(64)->Arg(4096);

void BM_GridworldStep(benchmark::State& state) {
  GridworldConfig c;
  c.n_steps = 3;
  Gridworld env(c);
  Rng rng(5);
  env.reset(rng);
  for (auto _ : state) {
    if (env.done()) env.reset(rng);
    benchmark::DoNotOptimize(env.step(rng.uniform_int(64)));
  }
}
BENCHMARK(BM_GridworldStep);

}  // namespace
}  // namespace tracerl

BENCHMARK_MAIN();
