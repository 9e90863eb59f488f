#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "tracerl/nn/rng.hpp"

namespace tracerl {

struct EnvSpec {
  int state_dim = 0;
  int action_count = 0;
  int max_steps = 0;  // episode cap, in agent decisions
};

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool done = false;
  // Episode ended by the step cap rather than a terminal event.
  bool truncated = false;
};

// Episodic task with a discrete action set. Implementations are deterministic
// given the generator passed to reset().
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvSpec spec() const = 0;
  virtual std::string name() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) = 0;
  // Throws std::logic_error when called after the episode has ended.
  virtual StepResult step(int action_index) = 0;
  virtual bool done() const = 0;
  virtual Eigen::VectorXd state() const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;

  Eigen::VectorXd reset(std::uint64_t seed) {
    Rng rng(seed);
    return reset(rng);
  }
};

}  // namespace tracerl
