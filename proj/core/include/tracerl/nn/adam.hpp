#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "tracerl/nn/mlp.hpp"

namespace tracerl {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameter blocks.
class Adam {
 public:
  Adam() = default;
  Adam(AdamConfig config, std::span<const Eigen::MatrixXd> params);

  // Dense update of every block. Rejects the whole step (std::domain_error)
  // if any gradient entry is non-finite; parameters are then untouched.
  void step(std::span<Eigen::MatrixXd> params, std::span<const Eigen::MatrixXd> grads);

  // Lazy row-sparse update for a single-block optimizer: only the listed rows
  // of the block and of its moments change. Duplicate rows are applied once.
  void step_rows(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, std::span<const int> rows);

  const AdamConfig& config() const { return config_; }
  std::int64_t step_count() const { return step_count_; }
  const ParamList& first_moment() const { return m_; }
  const ParamList& second_moment() const { return v_; }

 private:
  void check_shapes(std::span<const Eigen::MatrixXd> params, std::span<const Eigen::MatrixXd> grads) const;

  AdamConfig config_;
  std::int64_t step_count_ = 0;
  ParamList m_;
  ParamList v_;
};

}  // namespace tracerl
