#include "tracerl/env/cartpole.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tracerl {

void CartPoleConfig::validate() const {
  if (force_levels < 2) throw std::invalid_argument("cartpole: force_levels must be at least 2");
  if (!(force_max > force_min)) throw std::invalid_argument("cartpole: empty force range");
  if (!(dt > 0.0) || max_steps < 1) throw std::invalid_argument("cartpole: dt and max_steps must be positive");
}

double CartPoleConfig::force(int level) const {
  if (level < 0 || level >= force_levels) throw std::out_of_range("cartpole: force level out of range");
  return force_min + (force_max - force_min) * static_cast<double>(level) / static_cast<double>(force_levels - 1);
}

CartPole::CartPole(CartPoleConfig config) : config_(config) { config_.validate(); }

std::string CartPole::name() const { return "cartpole-k" + std::to_string(config_.force_levels); }

Eigen::VectorXd CartPole::reset(Rng& rng) {
  Eigen::Vector4d s;
  for (int i = 0; i < 4; ++i) s(i) = rng.uniform(-0.05, 0.05);
  set_state(s);
  return state_;
}

void CartPole::set_state(const Eigen::Vector4d& state) {
  state_ = state;
  steps_ = 0;
  done_ = false;
}

StepResult CartPole::step(int action_index) {
  if (done_) throw std::logic_error("CartPole::step: episode already finished");
  const double force = config_.force(action_index);
  const double x = state_(0), x_dot = state_(1), theta = state_(2), theta_dot = state_(3);
  const double total_mass = config_.cart_mass + config_.pole_mass;
  const double pole_moment = config_.pole_mass * config_.half_length;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);

  const double temp = (force + pole_moment * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc = (config_.gravity * sin_t - cos_t * temp) /
                           (config_.half_length * (4.0 / 3.0 - config_.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_moment * theta_acc * cos_t / total_mass;

  // Explicit Euler: positions advance with the old velocities.
  state_(0) = x + config_.dt * x_dot;
  state_(1) = x_dot + config_.dt * x_acc;
  state_(2) = theta + config_.dt * theta_dot;
  state_(3) = theta_dot + config_.dt * theta_acc;
  ++steps_;

  const double angle_limit = config_.angle_limit_deg * std::numbers::pi / 180.0;
  const bool failed = std::abs(state_(2)) > angle_limit || std::abs(state_(0)) > config_.position_limit;
  done_ = failed || steps_ >= config_.max_steps;
  return {state_, 1.0, done_, done_ && !failed};
}

}  // namespace tracerl
