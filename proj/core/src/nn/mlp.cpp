#include "tracerl/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tracerl {

namespace {

void apply_activation(Activation a, Eigen::MatrixXd& m) {
  switch (a) {
    case Activation::kLinear:
      break;
    case Activation::kRelu:
      m = m.cwiseMax(0.0);
      break;
    case Activation::kTanh:
      m = m.array().tanh().matrix();
      break;
  }
}

// Multiplies upstream in place by the activation derivative at preact.
void apply_derivative(Activation a, const Eigen::MatrixXd& preact, Eigen::MatrixXd& upstream) {
  switch (a) {
    case Activation::kLinear:
      break;
    case Activation::kRelu:
      upstream = (preact.array() > 0.0).select(upstream, 0.0);
      break;
    case Activation::kTanh:
      upstream.array() *= 1.0 - preact.array().tanh().square();
      break;
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "linear";
}

Activation activation_from_string(const std::string& name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

ParamGrads zeros_like(std::span<const Eigen::MatrixXd> params) {
  ParamGrads out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
  return out;
}

bool all_finite(std::span<const Eigen::MatrixXd> tensors) {
  for (const auto& t : tensors) {
    if (!t.allFinite()) return false;
  }
  return true;
}

void add_into(ParamGrads& into, const ParamGrads& from) {
  if (into.size() != from.size()) throw std::invalid_argument("add_into: block count mismatch");
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

Mlp::Mlp(std::vector<int> layer_sizes, Activation hidden, Activation output)
    : sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  if (hidden_ == Activation::kLinear) throw std::invalid_argument("Mlp: hidden activation must be relu or tanh");
  if (output_ == Activation::kRelu) throw std::invalid_argument("Mlp: output activation must be linear or tanh");
  params_.reserve(2 * (sizes_.size() - 1));
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    params_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    params_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], 1));
  }
}

Mlp Mlp::glorot(std::vector<int> layer_sizes, Activation hidden, Activation output, Rng& rng) {
  Mlp mlp(std::move(layer_sizes), hidden, output);
  for (int l = 0; l < mlp.num_layers(); ++l) {
    auto& w = mlp.weight(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-limit, limit);
    }
  }
  return mlp;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.size());
  return n;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  Eigen::MatrixXd out = forward(Eigen::MatrixXd(input));
  return out.col(0);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& batch) const {
  if (batch.rows() != input_dim()) {
    throw std::invalid_argument("Mlp::forward: expected input width " + std::to_string(input_dim()) + ", got " +
                                std::to_string(batch.rows()));
  }
  Eigen::MatrixXd x = batch;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = weight(l) * x;
    z.colwise() += bias(l).col(0);
    apply_activation(l + 1 == num_layers() ? output_ : hidden_, z);
    x = std::move(z);
  }
  return x;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& batch, MlpTape& tape,
                             const Eigen::MatrixXd* first_layer_offset) const {
  if (batch.rows() != input_dim()) {
    throw std::invalid_argument("Mlp::forward: expected input width " + std::to_string(input_dim()) + ", got " +
                                std::to_string(batch.rows()));
  }
  if (first_layer_offset != nullptr &&
      (first_layer_offset->rows() != sizes_[1] || first_layer_offset->cols() != batch.cols())) {
    throw std::invalid_argument("Mlp::forward: first-layer offset shape mismatch");
  }
  tape.inputs.resize(num_layers());
  tape.preacts.resize(num_layers());
  tape.inputs[0] = batch;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd& z = tape.preacts[l];
    z.noalias() = weight(l) * tape.inputs[l];
    z.colwise() += bias(l).col(0);
    if (l == 0 && first_layer_offset != nullptr) z += *first_layer_offset;
    Eigen::MatrixXd a = z;
    apply_activation(l + 1 == num_layers() ? output_ : hidden_, a);
    if (l + 1 < num_layers()) {
      tape.inputs[l + 1] = std::move(a);
    } else {
      return a;
    }
  }
  return {};
}

Eigen::MatrixXd Mlp::backward(const MlpTape& tape, const Eigen::MatrixXd& upstream, ParamGrads* grads,
                              Eigen::MatrixXd* first_preact_grad) const {
  if (static_cast<int>(tape.preacts.size()) != num_layers()) {
    throw std::invalid_argument("Mlp::backward: tape does not belong to this network");
  }
  if (upstream.rows() != output_dim() || upstream.cols() != tape.inputs[0].cols()) {
    throw std::invalid_argument("Mlp::backward: upstream gradient shape mismatch");
  }
  if (grads != nullptr && grads->size() != params_.size()) {
    throw std::invalid_argument("Mlp::backward: gradient buffer shape mismatch");
  }
  Eigen::MatrixXd delta = upstream;
  for (int l = num_layers() - 1; l >= 0; --l) {
    apply_derivative(l + 1 == num_layers() ? output_ : hidden_, tape.preacts[l], delta);
    if (grads != nullptr) {
      (*grads)[2 * l].noalias() += delta * tape.inputs[l].transpose();
      (*grads)[2 * l + 1] += delta.rowwise().sum();
    }
    if (l == 0 && first_preact_grad != nullptr) *first_preact_grad = delta;
    Eigen::MatrixXd next(weight(l).cols(), delta.cols());
    next.noalias() = weight(l).transpose() * delta;
    delta = std::move(next);
  }
  return delta;
}

void Mlp::check_finite(const char* context) const {
  if (!all_finite(params_)) throw std::domain_error(std::string(context) + ": non-finite network parameter");
}

VectorBackward backward(const Mlp& mlp, const Eigen::VectorXd& input, const Eigen::VectorXd& upstream_grad) {
  MlpTape tape;
  mlp.forward(Eigen::MatrixXd(input), tape);
  VectorBackward out{zeros_like(mlp.params()), {}};
  out.input_grad = mlp.backward(tape, Eigen::MatrixXd(upstream_grad), &out.grads).col(0);
  return out;
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("polyak_update: tau must lie in [0, 1]");
  if (target.layer_sizes() != online.layer_sizes()) throw std::invalid_argument("polyak_update: shape mismatch");
  for (std::size_t i = 0; i < target.params().size(); ++i) {
    if (tau == 0.0) {
      target.params()[i] = online.params()[i];
    } else if (tau != 1.0) {
      target.params()[i] = tau * target.params()[i] + (1.0 - tau) * online.params()[i];
    }
  }
}

}  // namespace tracerl
