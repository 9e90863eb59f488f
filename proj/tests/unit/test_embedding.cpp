#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tracerl/embedding/action_embedding_table.hpp"
#include "tracerl/embedding/offline_fit.hpp"
#include "tracerl/embedding/transition_model.hpp"
#include "tracerl/env/gridworld.hpp"

namespace tracerl {
namespace {

TransitionModelConfig small_config(TransitionMode mode, int state_dim = 3, int action_dim = 2) {
  TransitionModelConfig c;
  c.mode = mode;
  c.state_dim = state_dim;
  c.action_dim = action_dim;
  c.hiddens = {6, 5};
  c.z_dim = 2;
  c.z_hiddens = {4};
  c.beta = 0.01;
  return c;
}

void zero_all(Mlp& m) {
  for (auto& p : m.params()) p.setZero();
}

TEST(EmbeddingTable, LookupCopiesRows) {
  Eigen::MatrixXd rows(2, 2);
  rows << 0, 0, 1, 2;
  ActionEmbeddingTable t(rows);
  Eigen::VectorXd e = t.lookup(1);
  EXPECT_EQ(e, Eigen::Vector2d(1, 2));
  e(0) = 99.0;
  EXPECT_EQ(t.rows()(1, 0), 1.0);
  EXPECT_NO_THROW(t.lookup(0));
  EXPECT_THROW(t.lookup(2), std::out_of_range);
  EXPECT_THROW(t.lookup(-1), std::out_of_range);
}

TEST(EmbeddingTable, RandomInitIsBoundedAndSeeded) {
  Rng a(3), b(3);
  const auto t = ActionEmbeddingTable::random(16, 4, a);
  EXPECT_LE(t.rows().cwiseAbs().maxCoeff(), 0.1);
  EXPECT_EQ(t.rows(), ActionEmbeddingTable::random(16, 4, b).rows());
  EXPECT_THROW(ActionEmbeddingTable(Eigen::MatrixXd(3, 0)), std::invalid_argument);
}

TEST(EmbeddingTable, CsvRoundTripIsExact) {
  Rng rng(1);
  const auto t = ActionEmbeddingTable::random(5, 3, rng);
  std::stringstream ss;
  write_embedding_csv(ss, t);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "action_index,e_0,e_1,e_2");
  EXPECT_EQ(read_embedding_csv(ss).rows(), t.rows());
}

TEST(EmbeddingTable, CsvRejectsMalformedInput) {
  std::stringstream bad("action_index,e_0\n1,0.5\n");
  EXPECT_THROW(read_embedding_csv(bad), std::runtime_error);
  std::stringstream ragged("action_index,e_0,e_1\n0,0.5\n");
  EXPECT_THROW(read_embedding_csv(ragged), std::runtime_error);
}

TEST(PredictNext, ZeroDecoderPredictsZero) {
  Rng rng(2);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic), rng);
  zero_all(m.decoder());
  const Prediction p = predict_next(m, Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(0.5, -0.5), Eigen::VectorXd());
  EXPECT_TRUE(p.next_state.isZero(0.0));
  EXPECT_EQ(p.mu.size(), 0);
}

// Single-sample form; fixed-size arguments would otherwise match both overloads.
Prediction predict1(const TransitionModel& m, const Eigen::VectorXd& s, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& noise) {
  return predict_next(m, s, a, noise);
}

TEST(PredictNext, LatentZeroNoiseDecodesMean) {
  Rng rng(4);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kLatent), rng);
  const Eigen::Vector3d s(0.1, -0.3, 0.7);
  const Eigen::Vector2d a(0.2, 0.4);
  const Prediction p = predict1(m, s, a, Eigen::Vector2d::Zero());
  // Oracle: decode with z = mu through the joint first layer.
  Eigen::VectorXd in(5);
  in << s, a;
  MlpTape tape;
  const Eigen::MatrixXd offset = m.z_weight() * p.mu;
  const Eigen::MatrixXd direct = m.decoder().forward(Eigen::MatrixXd(in), tape, &offset);
  EXPECT_TRUE(p.next_state.isApprox(direct, 1e-14));
  EXPECT_EQ(predict1(m, s, a, Eigen::Vector2d(0.3, 0.1)).next_state,
            predict1(m, s, a, Eigen::Vector2d(0.3, 0.1)).next_state);
}

TEST(PredictNext, RejectsWidthMismatch) {
  Rng rng(4);
  const TransitionModel m = TransitionModel::create(small_config(TransitionMode::kLatent), rng);
  EXPECT_THROW(predict1(m, Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)),
               std::invalid_argument);
  EXPECT_THROW(predict1(m, Eigen::Vector3d(0, 0, 0), Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)),
               std::invalid_argument);
}

EmbeddingBatch one_sample(const Eigen::VectorXd& s, int action, const Eigen::VectorXd& next) {
  return {Eigen::MatrixXd(s), {action}, Eigen::MatrixXd(next)};
}

TEST(EmbeddingLoss, PerfectPredictionWithStandardPosteriorIsZero) {
  Rng rng(5);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kLatent, 2, 1), rng);
  zero_all(m.encoder());
  zero_all(m.decoder());
  m.z_weight().setZero();
  const ActionEmbeddingTable t(Eigen::MatrixXd::Ones(2, 1));
  const EmbeddingLoss l = embedding_loss(m, t, one_sample(Eigen::Vector2d(1, 1), 0, Eigen::Vector2d::Zero()),
                                         Eigen::MatrixXd::Constant(2, 1, 0.4));
  EXPECT_EQ(l.total, 0.0);
}

TEST(EmbeddingLoss, KlTermScaledByBeta) {
  TransitionModelConfig c = small_config(TransitionMode::kLatent, 2, 1);
  c.z_dim = 1;
  Rng rng(6);
  TransitionModel m = TransitionModel::create(c, rng);
  zero_all(m.encoder());
  zero_all(m.decoder());
  m.z_weight().setZero();
  // Encoder output (mu, log sigma) = (1, 0).
  m.encoder().bias(m.encoder().num_layers() - 1)(0) = 1.0;
  const ActionEmbeddingTable t(Eigen::MatrixXd::Ones(2, 1));
  const EmbeddingLoss l = embedding_loss(m, t, one_sample(Eigen::Vector2d(1, 1), 1, Eigen::Vector2d::Zero()),
                                         Eigen::MatrixXd::Constant(1, 1, 0.2));
  EXPECT_NEAR(l.kl, 0.5, 1e-15);
  EXPECT_NEAR(l.total, 0.005, 1e-15);
}

TEST(EmbeddingLoss, DeterministicIsSquaredError) {
  Rng rng(7);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic, 2, 1), rng);
  zero_all(m.decoder());
  m.decoder().bias(m.decoder().num_layers() - 1) = Eigen::Vector2d(1.0, 0.0);
  const ActionEmbeddingTable t(Eigen::MatrixXd::Zero(1, 1));
  const EmbeddingLoss l =
      embedding_loss(m, t, one_sample(Eigen::Vector2d(3, 4), 0, Eigen::Vector2d::Zero()), Eigen::MatrixXd());
  EXPECT_DOUBLE_EQ(l.total, 1.0);
  EXPECT_EQ(l.kl, 0.0);
}

TEST(EmbeddingLoss, RejectsEmptyBatch) {
  Rng rng(7);
  const TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic), rng);
  const ActionEmbeddingTable t(Eigen::MatrixXd::Zero(2, 2));
  const EmbeddingBatch empty{Eigen::MatrixXd(3, 0), {}, Eigen::MatrixXd(3, 0)};
  EXPECT_THROW(embedding_loss(m, t, empty, Eigen::MatrixXd()), std::invalid_argument);
}

class ReductionProperty : public ::testing::TestWithParam<int> {};

TEST_P(ReductionProperty, DeterministicEqualsLatentWithZeroZ) {
  Rng rng(300 + GetParam());
  TransitionModelConfig c = small_config(TransitionMode::kLatent, 3, 2);
  c.beta = 0.0;
  TransitionModel latent = TransitionModel::create(c, rng);
  zero_all(latent.encoder());
  const TransitionModel det = deterministic_reduction(latent);
  const ActionEmbeddingTable t = ActionEmbeddingTable::random(5, 2, rng);
  const int n = 7;
  EmbeddingBatch b{testing::uniform_matrix(3, n, rng), {}, testing::uniform_matrix(3, n, rng)};
  for (int i = 0; i < n; ++i) b.actions.push_back(rng.uniform_int(5));
  EXPECT_EQ(embedding_loss(det, t, b, Eigen::MatrixXd()).total,
            embedding_loss(latent, t, b, Eigen::MatrixXd::Zero(2, n)).total);
}

INSTANTIATE_TEST_SUITE_P(RandomBatches, ReductionProperty, ::testing::Range(0, 20));

std::vector<Transition> tiny_dataset(int n, Rng& rng) {
  std::vector<Transition> d;
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.state = testing::uniform_matrix(3, 1, rng).col(0);
    t.action_index = rng.uniform_int(4);
    t.next_state = t.state + Eigen::Vector3d(0.1 * t.action_index, -0.05, 0.0);
    t.proto_action = Eigen::VectorXd::Zero(2);
    d.push_back(t);
  }
  return d;
}

TEST(TrainEmbeddingsStep, FrozenModelKeepsParametersButMovesTable) {
  Rng rng(8);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kLatent), rng);
  ActionEmbeddingTable t = ActionEmbeddingTable::random(4, 2, rng);
  m.frozen = true;
  const TransitionModel before = m;
  const Eigen::MatrixXd rows_before = t.rows();
  auto data = tiny_dataset(16, rng);
  std::vector<int> idx(16);
  for (int i = 0; i < 16; ++i) idx[i] = i;
  const EmbeddingBatch b = make_embedding_batch(data, idx);
  auto opt = make_embedding_optimizers(m, t, 1e-2);
  train_embeddings_step(m, t, b, opt, rng.normal_matrix(2, 16));
  EXPECT_EQ(m.encoder().params(), before.encoder().params());
  EXPECT_EQ(m.decoder().params(), before.decoder().params());
  EXPECT_EQ(m.z_weight(), before.z_weight());
  EXPECT_NE(t.rows(), rows_before);
}

TEST(TrainEmbeddingsStep, FrozenTableIsUntouched) {
  Rng rng(9);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic), rng);
  ActionEmbeddingTable t = ActionEmbeddingTable::random(4, 2, rng);
  t.frozen = true;
  const Eigen::MatrixXd rows_before = t.rows();
  auto data = tiny_dataset(8, rng);
  const std::vector<int> idx{0, 1, 2, 3, 4, 5, 6, 7};
  auto opt = make_embedding_optimizers(m, t, 1e-2);
  train_embeddings_step(m, t, make_embedding_batch(data, idx), opt, Eigen::MatrixXd());
  EXPECT_EQ(t.rows(), rows_before);
}

TEST(TrainEmbeddingsStep, PerfectModelDoesNotMove) {
  Rng rng(10);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic, 2, 1), rng);
  zero_all(m.decoder());
  ActionEmbeddingTable t(Eigen::MatrixXd::Constant(2, 1, 0.5));
  const TransitionModel before = m;
  auto opt = make_embedding_optimizers(m, t, 1e-2);
  const double loss =
      train_embeddings_step(m, t, one_sample(Eigen::Vector2d(1, 2), 1, Eigen::Vector2d::Zero()), opt, {});
  EXPECT_EQ(loss, 0.0);
  EXPECT_EQ(m.decoder().params(), before.decoder().params());
  EXPECT_EQ(t.rows(), Eigen::MatrixXd::Constant(2, 1, 0.5));
}

TEST(TrainEmbeddingsStep, LossNonIncreasingOnFixedBatch) {
  Rng rng(11);
  TransitionModel m = TransitionModel::create(small_config(TransitionMode::kDeterministic), rng);
  ActionEmbeddingTable t = ActionEmbeddingTable::random(4, 2, rng);
  auto data = tiny_dataset(32, rng);
  std::vector<int> idx(32);
  for (int i = 0; i < 32; ++i) idx[i] = i;
  const EmbeddingBatch b = make_embedding_batch(data, idx);
  auto opt = make_embedding_optimizers(m, t, 1e-3);
  double prev = train_embeddings_step(m, t, b, opt, {});
  const double first = prev;
  for (int i = 0; i < 100; ++i) {
    const double cur = train_embeddings_step(m, t, b, opt, {});
    EXPECT_LE(cur, prev + 1e-12);
    prev = cur;
  }
  EXPECT_LT(prev, first);
}

TEST(OfflineFit, ZeroEpochsAndDeterminism) {
  Rng rng(12);
  const TransitionModel m0 = TransitionModel::create(small_config(TransitionMode::kDeterministic), rng);
  const ActionEmbeddingTable t0 = ActionEmbeddingTable::random(4, 2, rng);
  const auto data = tiny_dataset(50, rng);

  TransitionModel m = m0;
  ActionEmbeddingTable t = t0;
  OfflineFitConfig none{0, 16, 1e-3};
  EXPECT_TRUE(fit_embeddings_offline(m, t, data, none, 1).empty());
  EXPECT_EQ(t.rows(), t0.rows());

  OfflineFitConfig cfg{5, 16, 1e-3};
  TransitionModel ma = m0, mb = m0;
  ActionEmbeddingTable ta = t0, tb = t0;
  EXPECT_EQ(fit_embeddings_offline(ma, ta, data, cfg, 7), fit_embeddings_offline(mb, tb, data, cfg, 7));
  EXPECT_EQ(ta.rows(), tb.rows());
  EXPECT_THROW(fit_embeddings_offline(ma, ta, {}, cfg, 7), std::invalid_argument);
}

TEST(OfflineFit, ThreeStepGridworldLossDropsTenfold) {
  GridworldConfig g;
  g.n_steps = 3;
  Gridworld env(g);
  const auto data = collect_random_transitions(env, 10000, 1);
  TransitionModelConfig c;
  c.state_dim = 4;
  c.action_dim = 4;
  Rng rng(1);
  TransitionModel m = TransitionModel::create(c, rng);
  ActionEmbeddingTable t = ActionEmbeddingTable::random(64, 4, rng);
  const auto losses = fit_embeddings_offline(m, t, data, OfflineFitConfig{50, 128, 1e-3}, 2);
  ASSERT_EQ(losses.size(), 50u);
  EXPECT_LT(losses.back(), 0.1 * losses.front());
}

}  // namespace
}  // namespace tracerl
