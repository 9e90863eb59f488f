#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tracerl/env/environment.hpp"

namespace tracerl {

// One environment interaction. Both the proto-action (what the policy
// emitted in embedding space) and the executed discrete action are kept: the
// critic trains on the former, the embedding loss indexes the table with the
// latter.
struct Transition {
  Eigen::VectorXd state;
  int action_index = 0;
  Eigen::VectorXd proto_action;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;  // terminal event; false when the episode was cut by the step cap
};

// Uniform-random-policy rollouts; episodes are reset on termination. When
// embedding_rows is given, proto_action is the executed action's row, else a
// zero vector of length proto_dim.
std::vector<Transition> collect_random_transitions(Environment& env, int count, std::uint64_t seed,
                                                   const Eigen::MatrixXd* embedding_rows = nullptr,
                                                   int proto_dim = 0);

// JSON-lines persistence, one Transition per line.
void write_transitions_jsonl(std::ostream& out, const std::vector<Transition>& data);
std::vector<Transition> read_transitions_jsonl(std::istream& in);
void save_transitions(const std::string& path, const std::vector<Transition>& data);
std::vector<Transition> load_transitions(const std::string& path);

}  // namespace tracerl
