#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "tracerl/env/environment.hpp"

namespace tracerl {

enum class Move { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

enum class StateEncoding { kCoords, kOneHot };

struct GridworldConfig {
  int grid_size = 11;
  int n_steps = 1;  // atomic moves per action
  StateEncoding encoding = StateEncoding::kCoords;
  double step_reward = -0.05;
  double goal_reward = 10.0;
  int max_actions = 20;

  int action_count() const;
  int state_dim() const;
  void validate() const;
};

struct GridPosition {
  int x = 0;
  int y = 0;
  bool operator==(const GridPosition&) const = default;
};

// Base-4 digits of index, most significant first; 0=Up 1=Down 2=Left 3=Right.
std::vector<Move> decode_action(const GridworldConfig& config, int index);
// Inverse of decode_action; moves.size() must equal n_steps.
int encode_action(const GridworldConfig& config, const std::vector<Move>& moves);
Eigen::Vector2i move_delta(Move move);
// Summed displacement of an action's moves in free space (no walls).
Eigen::Vector2i net_displacement(const GridworldConfig& config, int index);

class Gridworld final : public Environment {
 public:
  explicit Gridworld(GridworldConfig config);

  EnvSpec spec() const override;
  std::string name() const override;
  Eigen::VectorXd reset(Rng& rng) override;
  using Environment::reset;
  StepResult step(int action_index) override;
  bool done() const override { return done_; }
  Eigen::VectorXd state() const override { return encode(agent_, goal_); }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<Gridworld>(*this); }

  const GridworldConfig& config() const { return config_; }
  GridPosition agent() const { return agent_; }
  GridPosition goal() const { return goal_; }
  int actions_taken() const { return actions_taken_; }

  // Starts a fresh episode at the given cells (tests, scripted rollouts).
  void place(GridPosition agent, GridPosition goal);

  Eigen::VectorXd encode(GridPosition agent, GridPosition goal) const;
  // Inverse of encode() for either encoding: (agent, goal).
  std::array<GridPosition, 2> decode_state(const Eigen::VectorXd& state) const;

 private:
  GridworldConfig config_;
  GridPosition agent_;
  GridPosition goal_;
  int actions_taken_ = 0;
  bool done_ = true;
};

}  // namespace tracerl
