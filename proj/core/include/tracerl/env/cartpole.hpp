#pragma once

#include <Eigen/Core>

#include "tracerl/env/environment.hpp"

namespace tracerl {

struct CartPoleConfig {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double dt = 0.02;
  int force_levels = 21;
  double force_min = -10.0;
  double force_max = 10.0;
  double angle_limit_deg = 12.0;
  double position_limit = 2.4;
  int max_steps = 100;

  void validate() const;
  // k equally spaced forces spanning [force_min, force_max].
  double force(int level) const;
};

// Classic cart-pole with the force discretized into force_levels actions.
// State is (x, x_dot, theta, theta_dot); one explicit Euler step per action.
class CartPole final : public Environment {
 public:
  explicit CartPole(CartPoleConfig config);

  EnvSpec spec() const override { return {4, config_.force_levels, config_.max_steps}; }
  std::string name() const override;
  Eigen::VectorXd reset(Rng& rng) override;
  using Environment::reset;
  StepResult step(int action_index) override;
  bool done() const override { return done_; }
  Eigen::VectorXd state() const override { return state_; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<CartPole>(*this); }

  const CartPoleConfig& config() const { return config_; }
  // Starts a fresh episode from an explicit state.
  void set_state(const Eigen::Vector4d& state);

 private:
  CartPoleConfig config_;
  Eigen::Vector4d state_ = Eigen::Vector4d::Zero();
  int steps_ = 0;
  bool done_ = true;
};

}  // namespace tracerl
