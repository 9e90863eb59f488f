#pragma once

#include <vector>

#include <Eigen/Core>

#include "tracerl/nn/mlp.hpp"

namespace tracerl {

enum class EmbedderMode { kIdentity, kLearned };

// Maps raw task states into the common space shared by policy and transition
// model. Identity in same-domain transfer.
class StateEmbedder {
 public:
  StateEmbedder() = default;
  static StateEmbedder identity(int state_dim);
  static StateEmbedder learned(int state_dim, const std::vector<int>& hiddens, int output_dim, Rng& rng);

  EmbedderMode mode() const { return mode_; }
  bool learned() const { return mode_ == EmbedderMode::kLearned; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }

  Eigen::MatrixXd embed(const Eigen::MatrixXd& states) const;
  Eigen::VectorXd embed(const Eigen::VectorXd& state) const;
  Eigen::MatrixXd embed(const Eigen::MatrixXd& states, MlpTape& tape) const;
  // Accumulates parameter gradients (learned mode only).
  void backward(const MlpTape& tape, const Eigen::MatrixXd& upstream, ParamGrads& grads) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

 private:
  EmbedderMode mode_ = EmbedderMode::kIdentity;
  int input_dim_ = 0;
  int output_dim_ = 0;
  Mlp net_;
};

}  // namespace tracerl
