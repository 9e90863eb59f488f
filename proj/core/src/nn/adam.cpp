#include "tracerl/nn/adam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracerl {

Adam::Adam(AdamConfig config, std::span<const Eigen::MatrixXd> params) : config_(config) {
  if (!(config_.lr > 0.0)) throw std::invalid_argument("Adam: lr must be positive");
  if (!(config_.beta1 > 0.0 && config_.beta1 < 1.0) || !(config_.beta2 > 0.0 && config_.beta2 < 1.0)) {
    throw std::invalid_argument("Adam: betas must lie in (0, 1)");
  }
  if (!(config_.epsilon > 0.0)) throw std::invalid_argument("Adam: epsilon must be positive");
  m_ = zeros_like(params);
  v_ = zeros_like(params);
}

void Adam::check_shapes(std::span<const Eigen::MatrixXd> params, std::span<const Eigen::MatrixXd> grads) const {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: block count mismatch");
  }
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (params[i].rows() != m_[i].rows() || params[i].cols() != m_[i].cols() || grads[i].rows() != m_[i].rows() ||
        grads[i].cols() != m_[i].cols()) {
      throw std::invalid_argument("Adam::step: shape mismatch in block " + std::to_string(i));
    }
  }
}

void Adam::step(std::span<Eigen::MatrixXd> params, std::span<const Eigen::MatrixXd> grads) {
  check_shapes(params, grads);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i].allFinite()) {
      throw std::domain_error("Adam::step: non-finite gradient in block " + std::to_string(i) + ", update rejected");
    }
  }
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i].cwiseAbs2();
    params[i].array() -=
        config_.lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + config_.epsilon);
    if (!params[i].allFinite()) throw std::domain_error("Adam::step: parameter became non-finite");
  }
}

void Adam::step_rows(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, std::span<const int> rows) {
  check_shapes(std::span<const Eigen::MatrixXd>(&param, 1), std::span<const Eigen::MatrixXd>(&grad, 1));
  std::vector<int> unique(rows.begin(), rows.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (int r : unique) {
    if (r < 0 || r >= param.rows()) throw std::out_of_range("Adam::step_rows: row index out of range");
    if (!grad.row(r).allFinite()) throw std::domain_error("Adam::step_rows: non-finite gradient, update rejected");
  }
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  auto& m = m_[0];
  auto& v = v_[0];
  for (int r : unique) {
    m.row(r) = config_.beta1 * m.row(r) + (1.0 - config_.beta1) * grad.row(r);
    v.row(r) = config_.beta2 * v.row(r) + (1.0 - config_.beta2) * grad.row(r).cwiseAbs2();
    param.row(r).array() -=
        config_.lr * (m.row(r).array() / c1) / ((v.row(r).array() / c2).sqrt() + config_.epsilon);
  }
  if (!param.allFinite()) throw std::domain_error("Adam::step_rows: parameter became non-finite");
}

}  // namespace tracerl
