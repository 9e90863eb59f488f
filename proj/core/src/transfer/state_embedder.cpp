#include "tracerl/transfer/state_embedder.hpp"

#include <stdexcept>
#include <string>

namespace tracerl {

StateEmbedder StateEmbedder::identity(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("StateEmbedder: state_dim must be positive");
  StateEmbedder e;
  e.mode_ = EmbedderMode::kIdentity;
  e.input_dim_ = e.output_dim_ = state_dim;
  return e;
}

StateEmbedder StateEmbedder::learned(int state_dim, const std::vector<int>& hiddens, int output_dim, Rng& rng) {
  if (state_dim < 1 || output_dim < 1) throw std::invalid_argument("StateEmbedder: widths must be positive");
  StateEmbedder e;
  e.mode_ = EmbedderMode::kLearned;
  e.input_dim_ = state_dim;
  e.output_dim_ = output_dim;
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), hiddens.begin(), hiddens.end());
  sizes.push_back(output_dim);
  e.net_ = Mlp::glorot(sizes, Activation::kRelu, Activation::kLinear, rng);
  return e;
}

Eigen::MatrixXd StateEmbedder::embed(const Eigen::MatrixXd& states) const {
  if (states.rows() != input_dim_) {
    throw std::invalid_argument("StateEmbedder: expected state width " + std::to_string(input_dim_) + ", got " +
                                std::to_string(states.rows()));
  }
  return learned() ? net_.forward(states) : states;
}

Eigen::VectorXd StateEmbedder::embed(const Eigen::VectorXd& state) const {
  return embed(Eigen::MatrixXd(state)).col(0);
}

Eigen::MatrixXd StateEmbedder::embed(const Eigen::MatrixXd& states, MlpTape& tape) const {
  if (!learned()) return embed(states);
  return net_.forward(states, tape);
}

void StateEmbedder::backward(const MlpTape& tape, const Eigen::MatrixXd& upstream, ParamGrads& grads) const {
  if (!learned()) return;
  net_.backward(tape, upstream, &grads);
}

}  // namespace tracerl
