#include "tracerl/env/transition.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace tracerl {

namespace {

nlohmann::json to_json_array(const Eigen::VectorXd& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd from_json_array(const nlohmann::json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

std::vector<Transition> collect_random_transitions(Environment& env, int count, std::uint64_t seed,
                                                   const Eigen::MatrixXd* embedding_rows, int proto_dim) {
  if (count <= 0) throw std::invalid_argument("collect_random_transitions: count must be positive");
  const EnvSpec spec = env.spec();
  if (embedding_rows != nullptr && embedding_rows->rows() != spec.action_count) {
    throw std::invalid_argument("collect_random_transitions: embedding table rows != action count");
  }
  Rng rng(seed);
  std::vector<Transition> data;
  data.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd state = env.reset(rng);
  while (static_cast<int>(data.size()) < count) {
    Transition t;
    t.state = state;
    t.action_index = rng.uniform_int(spec.action_count);
    t.proto_action = embedding_rows != nullptr ? Eigen::VectorXd(embedding_rows->row(t.action_index).transpose())
                                               : Eigen::VectorXd::Zero(proto_dim);
    StepResult r = env.step(t.action_index);
    t.reward = r.reward;
    t.next_state = r.next_state;
    t.done = r.done && !r.truncated;
    data.push_back(std::move(t));
    state = r.done ? env.reset(rng) : r.next_state;
  }
  return data;
}

void write_transitions_jsonl(std::ostream& out, const std::vector<Transition>& data) {
  for (const auto& t : data) {
    nlohmann::json j;
    j["state"] = to_json_array(t.state);
    j["action_index"] = t.action_index;
    j["proto_action"] = to_json_array(t.proto_action);
    j["reward"] = t.reward;
    j["next_state"] = to_json_array(t.next_state);
    j["done"] = t.done;
    out << j.dump() << '\n';
  }
}

std::vector<Transition> read_transitions_jsonl(std::istream& in) {
  std::vector<Transition> data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Transition t;
      t.state = from_json_array(j.at("state"));
      t.action_index = j.at("action_index").get<int>();
      t.proto_action = from_json_array(j.at("proto_action"));
      t.reward = j.at("reward").get<double>();
      t.next_state = from_json_array(j.at("next_state"));
      t.done = j.at("done").get<bool>();
      data.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("transitions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return data;
}

void save_transitions(const std::string& path, const std::vector<Transition>& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_transitions_jsonl(out, data);
}

std::vector<Transition> load_transitions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_transitions_jsonl(in);
}

}  // namespace tracerl
