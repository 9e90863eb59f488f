#include "tracerl/embedding/transition_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tracerl/log.hpp"
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

void check_widths(const TransitionModel& model, const Eigen::MatrixXd& state_emb, const Eigen::MatrixXd& action_emb,
                  const Eigen::MatrixXd& noise) {
  if (state_emb.rows() != model.state_dim() || action_emb.rows() != model.action_dim() ||
      state_emb.cols() != action_emb.cols()) {
    throw std::invalid_argument("predict_next: expected state width " + std::to_string(model.state_dim()) +
                                " and action width " + std::to_string(model.action_dim()));
  }
  if (model.latent() && (noise.rows() != model.z_dim() || noise.cols() != state_emb.cols())) {
    throw std::invalid_argument("predict_next: noise must be z_dim x batch");
  }
}

// Forward pass keeping everything backward needs.
struct ForwardCache {
  Eigen::MatrixXd input;  // (state ++ action)
  MlpTape encoder_tape;
  MlpTape decoder_tape;
  Eigen::MatrixXd raw_log_sigma;
  Eigen::MatrixXd z;
  Prediction prediction;
};

void run_forward(const TransitionModel& model, const Eigen::MatrixXd& state_emb, const Eigen::MatrixXd& action_emb,
                 const Eigen::MatrixXd& noise, ForwardCache& cache) {
  check_widths(model, state_emb, action_emb, noise);
  cache.input = concat_rows(state_emb, action_emb);
  if (!model.latent()) {
    cache.prediction.next_state = model.decoder().forward(cache.input, cache.decoder_tape);
    return;
  }
  const int zd = model.z_dim();
  const Eigen::MatrixXd enc = model.encoder().forward(cache.input, cache.encoder_tape);
  cache.prediction.mu = enc.topRows(zd);
  cache.raw_log_sigma = enc.bottomRows(zd);
  cache.prediction.log_sigma = clamp_log_sigma(cache.raw_log_sigma);
  cache.z = cache.prediction.mu.array() + cache.prediction.log_sigma.array().exp() * noise.array();
  const Eigen::MatrixXd offset = model.z_weight() * cache.z;
  cache.prediction.next_state = model.decoder().forward(cache.input, cache.decoder_tape, &offset);
}

}  // namespace

TransitionModel TransitionModel::create(const TransitionModelConfig& config, Rng& rng) {
  if (config.state_dim < 1 || config.action_dim < 1) throw std::invalid_argument("TransitionModel: empty widths");
  TransitionModel model;
  model.config_ = config;
  const int in = config.state_dim + config.action_dim;
  if (config.mode == TransitionMode::kLatent) {
    if (config.z_dim < 1) throw std::invalid_argument("TransitionModel: latent mode needs z_dim >= 1");
    if (config.beta < 0.0) throw std::invalid_argument("TransitionModel: beta must be >= 0");
    model.encoder_ = Mlp::glorot(stack(in, config.z_hiddens, 2 * config.z_dim), Activation::kRelu,
                                 Activation::kLinear, rng);
    // Initialize decoder as if z were concatenated to its input, then split
    // off the z columns.
    Mlp joint = Mlp::glorot(stack(in + config.z_dim, config.hiddens, config.state_dim), Activation::kRelu,
                            Activation::kLinear, rng);
    model.decoder_ = Mlp(stack(in, config.hiddens, config.state_dim), Activation::kRelu, Activation::kLinear);
    for (int l = 0; l < joint.num_layers(); ++l) {
      model.decoder_.bias(l) = joint.bias(l);
      model.decoder_.weight(l) = l == 0 ? Eigen::MatrixXd(joint.weight(0).leftCols(in)) : joint.weight(l);
    }
    model.z_weight_ = joint.weight(0).rightCols(config.z_dim);
  } else {
    model.decoder_ = Mlp::glorot(stack(in, config.hiddens, config.state_dim), Activation::kRelu,
                                 Activation::kLinear, rng);
  }
  return model;
}

TransitionModel deterministic_reduction(const TransitionModel& latent_model) {
  TransitionModel out;
  out.config_ = latent_model.config_;
  out.config_.mode = TransitionMode::kDeterministic;
  out.decoder_ = latent_model.decoder_;
  out.frozen = latent_model.frozen;
  return out;
}

Prediction predict_next(const TransitionModel& model, const Eigen::MatrixXd& state_emb,
                        const Eigen::MatrixXd& action_emb, const Eigen::MatrixXd& noise) {
  ForwardCache cache;
  run_forward(model, state_emb, action_emb, noise, cache);
  return std::move(cache.prediction);
}

Prediction predict_next(const TransitionModel& model, const Eigen::VectorXd& state_emb,
                        const Eigen::VectorXd& action_emb, const Eigen::VectorXd& noise) {
  return predict_next(model, Eigen::MatrixXd(state_emb), Eigen::MatrixXd(action_emb),
                      model.latent() ? Eigen::MatrixXd(noise) : Eigen::MatrixXd());
}

TransitionModelGrads zero_grads(const TransitionModel& model) {
  TransitionModelGrads g;
  if (model.latent()) g.encoder = zeros_like(model.encoder().params());
  g.decoder = zeros_like(model.decoder().params());
  g.z_weight = Eigen::MatrixXd::Zero(model.z_weight().rows(), model.z_weight().cols());
  return g;
}

EmbeddingLoss embedding_loss(const TransitionModel& model, const ActionEmbeddingTable& table,
                             const EmbeddingBatch& batch, const Eigen::MatrixXd& noise,
                             TransitionModelGrads* model_grads, Eigen::MatrixXd* table_grad) {
  const auto n = static_cast<Eigen::Index>(batch.actions.size());
  if (n == 0) throw std::invalid_argument("embedding_loss: empty batch");
  if (batch.states.cols() != n || batch.next_states.cols() != n) {
    throw std::invalid_argument("embedding_loss: batch columns disagree");
  }
  if (batch.next_states.rows() != model.state_dim()) {
    throw std::invalid_argument("embedding_loss: target width differs from model state width");
  }
  if (table.dim() != model.action_dim()) throw std::invalid_argument("embedding_loss: table dim != model action dim");

  ForwardCache cache;
  run_forward(model, batch.states, table.gather(batch.actions), noise, cache);
  const Eigen::MatrixXd residual = cache.prediction.next_state - batch.next_states;
  const double inv_n = 1.0 / static_cast<double>(n);

  EmbeddingLoss loss;
  loss.prediction = residual.squaredNorm() * inv_n;
  if (model.latent()) loss.kl = kl_to_standard_normal(cache.prediction.mu, cache.prediction.log_sigma).sum() * inv_n;
  loss.total = model.latent() ? loss.prediction + model.beta() * loss.kl : loss.prediction;

  if (model_grads == nullptr && table_grad == nullptr) return loss;

  TransitionModelGrads scratch;
  TransitionModelGrads* mg = model_grads;
  if (mg == nullptr) {
    scratch = zero_grads(model);
    mg = &scratch;
  }
  const Eigen::MatrixXd upstream = (2.0 * inv_n) * residual;
  Eigen::MatrixXd first_preact_grad;
  Eigen::MatrixXd input_grad = model.decoder().backward(cache.decoder_tape, upstream, &mg->decoder,
                                                        model.latent() ? &first_preact_grad : nullptr);
  if (model.latent()) {
    mg->z_weight.noalias() += first_preact_grad * cache.z.transpose();
    const Eigen::MatrixXd dz = model.z_weight().transpose() * first_preact_grad;
    const Eigen::ArrayXXd sigma = cache.prediction.log_sigma.array().exp();
    const double kl_scale = model.beta() * inv_n;
    Eigen::MatrixXd enc_upstream(2 * model.z_dim(), n);
    enc_upstream.topRows(model.z_dim()) = dz + kl_scale * cache.prediction.mu;
    enc_upstream.bottomRows(model.z_dim()) =
        ((dz.array() * sigma * noise.array() + kl_scale * (sigma.square() - 1.0)) *
         clamp_log_sigma_mask(cache.raw_log_sigma).array())
            .matrix();
    input_grad += model.encoder().backward(cache.encoder_tape, enc_upstream, &mg->encoder);
  }
  if (table_grad != nullptr) {
    if (table_grad->rows() != table.action_count() || table_grad->cols() != table.dim()) {
      throw std::invalid_argument("embedding_loss: table gradient shape mismatch");
    }
    const auto action_rows = input_grad.bottomRows(model.action_dim());
    for (Eigen::Index i = 0; i < n; ++i) table_grad->row(batch.actions[i]) += action_rows.col(i).transpose();
  }
  return loss;
}

EmbeddingOptimizers make_embedding_optimizers(const TransitionModel& model, const ActionEmbeddingTable& table,
                                              double lr) {
  const AdamConfig cfg{lr};
  EmbeddingOptimizers opt;
  opt.encoder = Adam(cfg, model.encoder().params());
  opt.decoder = Adam(cfg, model.decoder().params());
  opt.z_weight = Adam(cfg, std::span<const Eigen::MatrixXd>(&model.z_weight(), 1));
  opt.table = Adam(cfg, std::span<const Eigen::MatrixXd>(&table.rows(), 1));
  return opt;
}

double train_embeddings_step(TransitionModel& model, ActionEmbeddingTable& table, const EmbeddingBatch& batch,
                             EmbeddingOptimizers& optimizers, const Eigen::MatrixXd& noise) {
  if (model.frozen && table.frozen) {
    log_warning("train_embeddings_step: transition model and embedding table are both frozen; nothing to update");
    return embedding_loss(model, table, batch, noise).total;
  }
  TransitionModelGrads grads = zero_grads(model);
  Eigen::MatrixXd table_grad = Eigen::MatrixXd::Zero(table.action_count(), table.dim());
  const EmbeddingLoss loss = embedding_loss(model, table, batch, noise, &grads, &table_grad);
  if (!model.frozen) {
    if (model.latent()) {
      optimizers.encoder.step(model.encoder().params(), grads.encoder);
      optimizers.z_weight.step(std::span<Eigen::MatrixXd>(&model.z_weight(), 1),
                               std::span<const Eigen::MatrixXd>(&grads.z_weight, 1));
    }
    optimizers.decoder.step(model.decoder().params(), grads.decoder);
  }
  if (!table.frozen) optimizers.table.step_rows(table.rows(), table_grad, batch.actions);
  return loss.total;
}

}  // namespace tracerl
