#include "tracerl/env/gridworld.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tracerl {

int GridworldConfig::action_count() const {
  int count = 1;
  for (int i = 0; i < n_steps; ++i) count *= 4;
  return count;
}

int GridworldConfig::state_dim() const { return encoding == StateEncoding::kCoords ? 4 : 4 * grid_size; }

void GridworldConfig::validate() const {
  if (grid_size < 2) throw std::invalid_argument("gridworld: grid_size must be at least 2");
  if (n_steps < 1 || n_steps > 3) throw std::invalid_argument("gridworld: n_steps must be 1, 2 or 3");
  if (max_actions < 1) throw std::invalid_argument("gridworld: max_actions must be positive");
}

std::vector<Move> decode_action(const GridworldConfig& config, int index) {
  if (index < 0 || index >= config.action_count()) {
    throw std::out_of_range("decode_action: index " + std::to_string(index) + " outside [0, " +
                            std::to_string(config.action_count()) + ")");
  }
  std::vector<Move> moves(config.n_steps);
  for (int i = config.n_steps - 1; i >= 0; --i) {
    moves[i] = static_cast<Move>(index % 4);
    index /= 4;
  }
  return moves;
}

int encode_action(const GridworldConfig& config, const std::vector<Move>& moves) {
  if (static_cast<int>(moves.size()) != config.n_steps) {
    throw std::invalid_argument("encode_action: expected " + std::to_string(config.n_steps) + " moves");
  }
  int index = 0;
  for (Move m : moves) index = index * 4 + static_cast<int>(m);
  return index;
}

Eigen::Vector2i move_delta(Move move) {
  switch (move) {
    case Move::kUp: return {0, 1};
    case Move::kDown: return {0, -1};
    case Move::kLeft: return {-1, 0};
    case Move::kRight: return {1, 0};
  }
  return {0, 0};
}

Eigen::Vector2i net_displacement(const GridworldConfig& config, int index) {
  Eigen::Vector2i total(0, 0);
  for (Move m : decode_action(config, index)) total += move_delta(m);
  return total;
}

Gridworld::Gridworld(GridworldConfig config) : config_(config) { config_.validate(); }

EnvSpec Gridworld::spec() const { return {config_.state_dim(), config_.action_count(), config_.max_actions}; }

std::string Gridworld::name() const {
  return "gridworld-n" + std::to_string(config_.n_steps) +
         (config_.encoding == StateEncoding::kCoords ? "-coords" : "-onehot");
}

Eigen::VectorXd Gridworld::reset(Rng& rng) {
  const int cells = config_.grid_size * config_.grid_size;
  const int a = rng.uniform_int(cells);
  int g = rng.uniform_int(cells);
  while (g == a) g = rng.uniform_int(cells);
  place({a % config_.grid_size, a / config_.grid_size}, {g % config_.grid_size, g / config_.grid_size});
  return state();
}

void Gridworld::place(GridPosition agent, GridPosition goal) {
  auto inside = [&](GridPosition p) { return p.x >= 0 && p.y >= 0 && p.x < config_.grid_size && p.y < config_.grid_size; };
  if (!inside(agent) || !inside(goal)) throw std::out_of_range("Gridworld::place: cell outside the grid");
  agent_ = agent;
  goal_ = goal;
  actions_taken_ = 0;
  done_ = agent == goal;
}

StepResult Gridworld::step(int action_index) {
  if (done_) throw std::logic_error("Gridworld::step: episode already finished");
  const auto moves = decode_action(config_, action_index);
  StepResult result;
  for (Move m : moves) {
    const Eigen::Vector2i d = move_delta(m);
    const int nx = agent_.x + d.x();
    const int ny = agent_.y + d.y();
    if (nx >= 0 && ny >= 0 && nx < config_.grid_size && ny < config_.grid_size) {
      agent_ = {nx, ny};
    }
    result.reward += config_.step_reward;
    if (agent_ == goal_) {
      result.reward += config_.goal_reward;
      done_ = true;
      break;
    }
  }
  ++actions_taken_;
  if (!done_ && actions_taken_ >= config_.max_actions) {
    done_ = true;
    result.truncated = true;
  }
  result.done = done_;
  result.next_state = state();
  return result;
}

Eigen::VectorXd Gridworld::encode(GridPosition agent, GridPosition goal) const {
  if (config_.encoding == StateEncoding::kCoords) {
    return Eigen::Vector4d(agent.x, agent.y, goal.x, goal.y);
  }
  const int n = config_.grid_size;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(4 * n);
  s(agent.x) = 1.0;
  s(n + agent.y) = 1.0;
  s(2 * n + goal.x) = 1.0;
  s(3 * n + goal.y) = 1.0;
  return s;
}

std::array<GridPosition, 2> Gridworld::decode_state(const Eigen::VectorXd& state) const {
  if (state.size() != config_.state_dim()) throw std::invalid_argument("Gridworld::decode_state: width mismatch");
  if (config_.encoding == StateEncoding::kCoords) {
    return {GridPosition{static_cast<int>(state(0)), static_cast<int>(state(1))},
            GridPosition{static_cast<int>(state(2)), static_cast<int>(state(3))}};
  }
  const int n = config_.grid_size;
  Eigen::Index idx[4];
  for (int b = 0; b < 4; ++b) state.segment(b * n, n).maxCoeff(&idx[b]);
  return {GridPosition{static_cast<int>(idx[0]), static_cast<int>(idx[1])},
          GridPosition{static_cast<int>(idx[2]), static_cast<int>(idx[3])}};
}

}  // namespace tracerl
