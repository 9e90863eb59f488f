#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tracerl/nn/rng.hpp"

namespace tracerl {

enum class Activation { kLinear, kRelu, kTanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// Parameter-shaped list of matrices. Biases are stored as (n x 1) matrices so
// that every trainable block has the same type.
using ParamList = std::vector<Eigen::MatrixXd>;
using ParamGrads = ParamList;

ParamGrads zeros_like(std::span<const Eigen::MatrixXd> params);
bool all_finite(std::span<const Eigen::MatrixXd> tensors);
void add_into(ParamGrads& into, const ParamGrads& from);

// Per-batch cache of layer inputs and pre-activations for backward().
struct MlpTape {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> preacts;
};

// Dense feed-forward network. Batches are column-major: one sample per column.
class Mlp {
 public:
  Mlp() = default;
  // Zero-initialized network.
  Mlp(std::vector<int> layer_sizes, Activation hidden, Activation output);

  // Glorot-uniform weights, zero biases.
  static Mlp glorot(std::vector<int> layer_sizes, Activation hidden, Activation output, Rng& rng);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }
  bool empty() const { return sizes_.empty(); }

  Eigen::MatrixXd& weight(int layer) { return params_[2 * layer]; }
  const Eigen::MatrixXd& weight(int layer) const { return params_[2 * layer]; }
  Eigen::MatrixXd& bias(int layer) { return params_[2 * layer + 1]; }
  const Eigen::MatrixXd& bias(int layer) const { return params_[2 * layer + 1]; }

  ParamList& params() { return params_; }
  const ParamList& params() const { return params_; }
  std::size_t parameter_count() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch) const;

  // first_layer_offset, when given, is added to the first pre-activation
  // (same shape). It lets a caller inject an extra input block without
  // concatenating it.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch, MlpTape& tape,
                          const Eigen::MatrixXd* first_layer_offset = nullptr) const;

  // Gradient of sum(upstream .* output) given the tape of the forward pass.
  // Parameter gradients are accumulated into *grads when non-null. Returns the
  // gradient w.r.t. the input batch; first_preact_grad receives the gradient
  // w.r.t. the first pre-activation when non-null.
  Eigen::MatrixXd backward(const MlpTape& tape, const Eigen::MatrixXd& upstream, ParamGrads* grads,
                           Eigen::MatrixXd* first_preact_grad = nullptr) const;

  // Throws std::domain_error when any parameter is NaN or infinite.
  void check_finite(const char* context) const;

 private:
  std::vector<int> sizes_;
  Activation hidden_ = Activation::kRelu;
  Activation output_ = Activation::kLinear;
  ParamList params_;
};

// Single-sample convenience wrapper around Mlp::backward.
struct VectorBackward {
  ParamGrads grads;
  Eigen::VectorXd input_grad;
};
VectorBackward backward(const Mlp& mlp, const Eigen::VectorXd& input, const Eigen::VectorXd& upstream_grad);

// target <- tau * target + (1 - tau) * online, elementwise over all parameters.
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace tracerl
